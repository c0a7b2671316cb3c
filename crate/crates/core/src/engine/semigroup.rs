use crate::error::{Error, Result};
use crate::phase::{Bornology, TimeArrow, TimePoint};

/// An evaluatable multi-parameter semigroup `S(h)`, `h` in a closed cone.
///
/// Implementations must satisfy `S(0) = Id` and `S(h1 + h2) = S(h1) S(h2)` up
/// to their scheme tolerance. Handles are shared read-only across workers.
pub trait Semigroup: Sync {
    type State: Clone + Send + Sync;

    fn arrow(&self) -> &TimeArrow;

    fn bornology(&self) -> &Bornology;

    fn apply(&self, h: &TimePoint, u: &Self::State) -> Result<Self::State>;

    /// Metric of the phase space.
    fn distance(&self, a: &Self::State, b: &Self::State) -> f64;

    /// Norm used for bornology membership and boundedness monitoring.
    fn norm(&self, u: &Self::State) -> f64;

    /// Residual against the bornology's constraint, if it has one.
    fn constraint_residual(&self, _u: &Self::State) -> Option<f64> {
        None
    }

    /// Short key used to order states canonically before net construction.
    fn canonical_key(&self, u: &Self::State) -> Vec<f64>;
}

pub(crate) fn check_in_cone<S: Semigroup + ?Sized>(s: &S, h: &TimePoint) -> Result<()> {
    if !s.arrow().cone().contains(h)? {
        return Err(Error::TimeOutsideCone(h.coords().to_vec()));
    }
    Ok(())
}

/// Distance between `S(h1 + h2) u` and `S(h1) S(h2) u`.
pub fn semigroup_law_defect<S: Semigroup>(
    s: &S,
    h1: &TimePoint,
    h2: &TimePoint,
    u: &S::State,
) -> Result<f64> {
    check_in_cone(s, h1)?;
    check_in_cone(s, h2)?;
    let joint = s.apply(&(h1 + h2), u)?;
    let split = s.apply(h1, &s.apply(h2, u)?)?;
    Ok(s.distance(&joint, &split))
}

/// Distance between `S(0) u` and `u`.
pub fn identity_defect<S: Semigroup>(s: &S, u: &S::State) -> Result<f64> {
    let zero = TimePoint::zero(s.arrow().dim());
    Ok(s.distance(&s.apply(&zero, u)?, u))
}

/// Evaluates `f` over `items`, splitting the work across up to
/// [`worker_count`] scoped threads. Output order matches input order.
pub fn par_map<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync) -> Vec<R> {
    let workers = worker_count().min(items.len()).max(1);
    if workers == 1 {
        return items.iter().map(f).collect();
    }
    let chunk = items.len().div_ceil(workers);
    std::thread::scope(|scope| {
        let handles: Vec<_> = items
            .chunks(chunk)
            .map(|part| {
                let f = &f;
                scope.spawn(move || part.iter().map(f).collect::<Vec<R>>())
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("worker panicked"))
            .collect()
    })
}

static WORKERS: std::sync::atomic::AtomicUsize = std::sync::atomic::AtomicUsize::new(1);

/// Number of workers used by [`par_map`]; defaults to one.
pub fn worker_count() -> usize {
    WORKERS.load(std::sync::atomic::Ordering::Relaxed)
}

pub fn set_worker_count(n: usize) {
    WORKERS.store(n.max(1), std::sync::atomic::Ordering::Relaxed);
}
