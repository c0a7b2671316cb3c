use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// Classification of a lattice cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CellTag {
    Interior,
    Boundary,
    Exterior,
}

impl CellTag {
    fn code(self) -> char {
        match self {
            CellTag::Interior => 'I',
            CellTag::Boundary => 'B',
            CellTag::Exterior => 'E',
        }
    }

    fn from_code(c: char) -> Option<Self> {
        match c {
            'I' => Some(CellTag::Interior),
            'B' => Some(CellTag::Boundary),
            'E' => Some(CellTag::Exterior),
            _ => None,
        }
    }
}

/// A masked rectangular lattice with uniform spacing.
///
/// Cell `i` along axis `a` has its center at `(lower[a] + i) * spacing`. Cells
/// are stored in row-major order (last axis fastest), which is also the
/// lexicographic order used for tie-breaking everywhere.
#[derive(Debug, Clone, PartialEq)]
pub struct GridDomain {
    spacing: f64,
    lower: Vec<i64>,
    shape: Vec<usize>,
    strides: Vec<usize>,
    mask: Vec<CellTag>,
    periodic: Vec<bool>,
}

impl GridDomain {
    pub fn new(
        spacing: f64,
        lower: Vec<i64>,
        shape: Vec<usize>,
        mask: Vec<CellTag>,
        periodic: Vec<bool>,
    ) -> Result<Self> {
        if !(spacing > 0.0) || !spacing.is_finite() {
            return Err(Error::InvalidDomain(format!("spacing must be positive, got {spacing}")));
        }
        let d = shape.len();
        if d == 0 || lower.len() != d || periodic.len() != d {
            return Err(Error::InvalidDomain("inconsistent axis counts".into()));
        }
        if shape.iter().any(|&n| n == 0) {
            return Err(Error::InvalidDomain("empty axis".into()));
        }
        let len: usize = shape.iter().product();
        if mask.len() != len {
            return Err(Error::InvalidDomain(format!(
                "mask has {} cells, shape needs {len}",
                mask.len()
            )));
        }
        let mut strides = vec![1; d];
        for a in (0..d.saturating_sub(1)).rev() {
            strides[a] = strides[a + 1] * shape[a + 1];
        }
        let dom = GridDomain {
            spacing,
            lower,
            shape,
            strides,
            mask,
            periodic,
        };
        dom.validate()?;
        Ok(dom)
    }

    fn validate(&self) -> Result<()> {
        let mut idx = vec![0usize; self.dim()];
        for cell in 0..self.len() {
            self.unravel_into(cell, &mut idx);
            if self.mask[cell] == CellTag::Interior {
                for a in 0..self.dim() {
                    for step in [-1i64, 1] {
                        match self.neighbor(cell, &idx, a, step) {
                            None => {
                                return Err(Error::InvalidDomain(format!(
                                    "interior cell {idx:?} touches the edge of the box on axis {a}"
                                )))
                            }
                            Some(n) if self.mask[n] == CellTag::Exterior => {
                                return Err(Error::InvalidDomain(format!(
                                    "interior cell {idx:?} has an exterior neighbor"
                                )))
                            }
                            _ => {}
                        }
                    }
                }
            }
            for a in 0..self.dim() {
                // periodic axes require the mask to be invariant along the axis
                if self.periodic[a] && idx[a] + 1 < self.shape[a] {
                    let next = cell + self.strides[a];
                    if self.mask[next] != self.mask[cell] {
                        return Err(Error::InvalidDomain(format!(
                            "mask varies along periodic axis {a}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Builds a domain from a membership predicate on cell centers. Member cells
    /// with an exterior neighbor (or on a non-periodic edge of the box) become
    /// `Boundary`; the rest become `Interior`.
    pub fn from_predicate(
        spacing: f64,
        lower: Vec<i64>,
        shape: Vec<usize>,
        periodic: Vec<bool>,
        inside: impl Fn(&[f64]) -> bool,
    ) -> Result<Self> {
        let d = shape.len();
        let len: usize = shape.iter().product();
        let mut strides = vec![1; d];
        for a in (0..d.saturating_sub(1)).rev() {
            strides[a] = strides[a + 1] * shape[a + 1];
        }
        let mut member = vec![false; len];
        let mut idx = vec![0usize; d];
        let mut x = vec![0.0; d];
        for (cell, m) in member.iter_mut().enumerate() {
            let mut rem = cell;
            for a in 0..d {
                idx[a] = rem / strides[a];
                rem %= strides[a];
                x[a] = (lower[a] + idx[a] as i64) as f64 * spacing;
            }
            *m = inside(&x);
        }
        let mut mask = vec![CellTag::Exterior; len];
        for cell in 0..len {
            if !member[cell] {
                continue;
            }
            let mut rem = cell;
            for a in 0..d {
                idx[a] = rem / strides[a];
                rem %= strides[a];
            }
            let mut boundary = false;
            'axes: for a in 0..d {
                for step in [-1i64, 1] {
                    let j = idx[a] as i64 + step;
                    let n = if j < 0 || j >= shape[a] as i64 {
                        if !periodic[a] {
                            boundary = true;
                            break 'axes;
                        }
                        let w = j.rem_euclid(shape[a] as i64) as usize;
                        cell - idx[a] * strides[a] + w * strides[a]
                    } else {
                        (cell as i64 + step * strides[a] as i64) as usize
                    };
                    if !member[n] {
                        boundary = true;
                        break 'axes;
                    }
                }
            }
            mask[cell] = if boundary { CellTag::Boundary } else { CellTag::Interior };
        }
        GridDomain::new(spacing, lower, shape, mask, periodic)
    }

    /// Fully periodic box of `n` cells per axis and side `length`, centered on the origin.
    pub fn periodic_box(dim: usize, n: usize, length: f64) -> Result<Self> {
        let spacing = length / n as f64;
        let len = n.pow(dim as u32);
        GridDomain::new(
            spacing,
            vec![-(n as i64 / 2); dim],
            vec![n; dim],
            vec![CellTag::Interior; len],
            vec![true; dim],
        )
    }

    /// 1D interval `[-half_length, half_length]` with boundary cells at both ends.
    pub fn interval(half_length: f64, spacing: f64) -> Result<Self> {
        let n = (half_length / spacing).round() as i64;
        GridDomain::from_predicate(spacing, vec![-n], vec![(2 * n + 1) as usize], vec![false], |_| true)
    }

    /// Annulus `r_in <= |x| <= r_out` centered on the origin, truncated to its
    /// bounding box; both circles are boundary.
    pub fn annulus(r_in: f64, r_out: f64, spacing: f64) -> Result<Self> {
        if !(r_in >= 0.0 && r_out > r_in) {
            return Err(Error::InvalidDomain(format!("bad annulus radii {r_in}, {r_out}")));
        }
        let n = (r_out / spacing).ceil() as i64 + 1;
        let side = (2 * n + 1) as usize;
        GridDomain::from_predicate(
            spacing,
            vec![-n, -n],
            vec![side, side],
            vec![false, false],
            |x| {
                let r = (x[0] * x[0] + x[1] * x[1]).sqrt();
                r >= r_in && r <= r_out
            },
        )
    }

    /// Strip `0 <= y <= width`, `0 <= x < length`. Axis 0 is `y`, axis 1 is `x`.
    /// With `periodic_x` the strip wraps along `x` and only the two long edges
    /// are boundary; otherwise the truncation ends are boundary as well.
    pub fn strip(width: f64, length: f64, spacing: f64, periodic_x: bool) -> Result<Self> {
        let ny = (width / spacing).round() as usize + 1;
        let nx = (length / spacing).round() as usize;
        GridDomain::from_predicate(
            spacing,
            vec![0, 0],
            vec![ny, nx],
            vec![false, periodic_x],
            |_| true,
        )
    }

    /// Two `side x side` squares joined by a straight corridor of
    /// `corridor_cells` cells width and `corridor_length` length.
    pub fn dumbbell(side: f64, corridor_length: f64, corridor_cells: usize, spacing: f64) -> Result<Self> {
        let ns = (side / spacing).round() as i64;
        let nc = (corridor_length / spacing).round() as i64;
        let total_x = 2 * ns + nc + 1;
        let ny = ns + 1;
        let mid = ns / 2;
        let half = corridor_cells as i64 / 2;
        let lo = mid - half;
        let hi = lo + corridor_cells as i64 - 1;
        GridDomain::from_predicate(
            spacing,
            vec![0, 0],
            vec![ny as usize, total_x as usize],
            vec![false, false],
            move |x| {
                let iy = (x[0] / spacing).round() as i64;
                let ix = (x[1] / spacing).round() as i64;
                let left = ix <= ns;
                let right = ix >= ns + nc;
                left || right || (iy >= lo && iy <= hi)
            },
        )
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn dim(&self) -> usize {
        self.shape.len()
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn lower(&self) -> &[i64] {
        &self.lower
    }

    pub fn periodic(&self) -> &[bool] {
        &self.periodic
    }

    pub fn len(&self) -> usize {
        self.mask.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mask.is_empty()
    }

    pub fn mask(&self) -> &[CellTag] {
        &self.mask
    }

    pub fn tag(&self, cell: usize) -> CellTag {
        self.mask[cell]
    }

    pub fn strides(&self) -> &[usize] {
        &self.strides
    }

    pub fn unravel_into(&self, cell: usize, idx: &mut [usize]) {
        let mut rem = cell;
        for a in 0..self.dim() {
            idx[a] = rem / self.strides[a];
            rem %= self.strides[a];
        }
    }

    pub fn unravel(&self, cell: usize) -> Vec<usize> {
        let mut idx = vec![0; self.dim()];
        self.unravel_into(cell, &mut idx);
        idx
    }

    pub fn ravel(&self, idx: &[usize]) -> usize {
        idx.iter().zip(&self.strides).map(|(i, s)| i * s).sum()
    }

    /// Neighbor of `cell` (with multi-index `idx`) one step along axis `a`,
    /// wrapping on periodic axes. `None` when the step leaves the box.
    #[inline]
    pub fn neighbor(&self, cell: usize, idx: &[usize], a: usize, step: i64) -> Option<usize> {
        let j = idx[a] as i64 + step;
        let n = self.shape[a] as i64;
        if j < 0 || j >= n {
            if !self.periodic[a] {
                return None;
            }
            let w = j.rem_euclid(n) as usize;
            return Some(cell - idx[a] * self.strides[a] + w * self.strides[a]);
        }
        Some((cell as i64 + step * self.strides[a] as i64) as usize)
    }

    /// Cell reached from `idx` by an integer offset, wrapping on periodic axes.
    pub fn offset_cell(&self, idx: &[usize], offset: &[i64]) -> Option<usize> {
        let mut cell = 0;
        for a in 0..self.dim() {
            let n = self.shape[a] as i64;
            let mut j = idx[a] as i64 + offset[a];
            if j < 0 || j >= n {
                if !self.periodic[a] {
                    return None;
                }
                j = j.rem_euclid(n);
            }
            cell += j as usize * self.strides[a];
        }
        Some(cell)
    }

    /// Center of a cell in spatial coordinates.
    pub fn position(&self, cell: usize) -> Vec<f64> {
        self.unravel(cell)
            .iter()
            .zip(&self.lower)
            .map(|(&i, &lo)| (lo + i as i64) as f64 * self.spacing)
            .collect()
    }

    /// Cell whose center is nearest to `x`, if inside the box.
    pub fn locate(&self, x: &[f64]) -> Option<usize> {
        if x.len() != self.dim() {
            return None;
        }
        let mut cell = 0;
        for a in 0..self.dim() {
            let j = (x[a] / self.spacing).round() as i64 - self.lower[a];
            if j < 0 || j >= self.shape[a] as i64 {
                return None;
            }
            cell += j as usize * self.strides[a];
        }
        Some(cell)
    }

    /// Cell containing the spatial origin, if the box covers it.
    pub fn origin_cell(&self) -> Option<usize> {
        self.locate(&vec![0.0; self.dim()])
    }

    pub fn count(&self, tag: CellTag) -> usize {
        self.mask.iter().filter(|&&t| t == tag).count()
    }

    pub fn descriptor(&self) -> DomainDescriptor {
        let mut runs: Vec<String> = Vec::new();
        let mut i = 0;
        while i < self.mask.len() {
            let t = self.mask[i];
            let mut j = i;
            while j < self.mask.len() && self.mask[j] == t {
                j += 1;
            }
            runs.push(format!("{}{}", t.code(), j - i));
            i = j;
        }
        DomainDescriptor {
            spacing: self.spacing,
            extents: self
                .lower
                .iter()
                .zip(&self.shape)
                .map(|(&lo, &n)| [lo, lo + n as i64])
                .collect(),
            mask_rle: runs.join(","),
            periodic: self.periodic.clone(),
        }
    }

    pub fn from_descriptor(desc: &DomainDescriptor) -> Result<Self> {
        let lower: Vec<i64> = desc.extents.iter().map(|e| e[0]).collect();
        let shape: Vec<usize> = desc
            .extents
            .iter()
            .map(|e| {
                if e[1] > e[0] {
                    Ok((e[1] - e[0]) as usize)
                } else {
                    Err(Error::InvalidDomain(format!("bad extent {e:?}")))
                }
            })
            .collect::<Result<_>>()?;
        let mut mask = Vec::with_capacity(shape.iter().product());
        for run in desc.mask_rle.split(',').filter(|r| !r.is_empty()) {
            let mut chars = run.chars();
            let tag = chars
                .next()
                .and_then(CellTag::from_code)
                .ok_or_else(|| Error::InvalidDomain(format!("bad mask run {run:?}")))?;
            let n: usize = chars
                .as_str()
                .parse()
                .map_err(|_| Error::InvalidDomain(format!("bad mask run {run:?}")))?;
            mask.extend(std::iter::repeat_n(tag, n));
        }
        GridDomain::new(desc.spacing, lower, shape, mask, desc.periodic.clone())
    }

    /// SHA-256 of the canonical JSON descriptor, hex-encoded.
    pub fn content_hash(&self) -> String {
        let json = serde_json::to_vec(&self.descriptor()).expect("descriptor serializes");
        hex::encode(Sha256::digest(&json))
    }
}

/// JSON form of a [`GridDomain`]: `{spacing, extents, mask_rle, periodic}`.
///
/// `extents` holds half-open index ranges `[lo, hi)` per axis and `mask_rle`
/// is a comma-separated run list such as `"E12,B3,I40"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainDescriptor {
    pub spacing: f64,
    pub extents: Vec<[i64; 2]>,
    pub mask_rle: String,
    pub periodic: Vec<bool>,
}
