//! Point configurations on the line and in the plane: separation, Beurling
//! densities, planar density, shears, and the `λ_n = n + δ_n` enumeration.
//!
//! Finite representations stand in for infinite sets: a `window_radius`
//! declares how far the representation is valid, and density estimates
//! report the whole radius profile so convergence toward the Beurling limit
//! stays auditable.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

/// Errors from point-set construction and analysis.
#[derive(Debug, Error)]
pub enum SequenceError {
    /// A constructor argument was out of range.
    #[error("invalid point set: {0}")]
    InvalidParameter(String),
    /// Too few points in the representation window.
    #[error("operation needs at least {needed} points, found {found}")]
    TooFewPoints { needed: usize, found: usize },
    /// The representation window cannot cover the requested radius.
    #[error("window radius {window} too small for requested radius {requested}")]
    Coverage { window: f64, requested: f64 },
    /// The set is not within bounded distance of a shifted integer grid.
    #[error("set is not enumerable as n + δ_n with |δ| ≤ {bound}: found δ = {worst}")]
    NotEnumerable { bound: f64, worst: f64 },
}

/// Relative tolerance for half-open window membership; keeps sliding-window
/// counts exact at radii commensurate with a period despite last-ulp float
/// drift in materialized points.
const EDGE_TOL: f64 = 1e-9;

/// A separated point set on the line.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet1D {
    kind: Kind1D,
    window_radius: f64,
}

#[derive(Debug, Clone, PartialEq)]
enum Kind1D {
    Explicit { points: Vec<f64> },
    Periodic { p: f64, offsets: Vec<f64> },
    Jittered { rho: f64, jitter: f64, seed: u64 },
}

impl PointSet1D {
    /// An explicit, strictly increasing list of points valid inside
    /// `[-window_radius, window_radius]`.
    pub fn explicit(points: Vec<f64>, window_radius: f64) -> Result<Self, SequenceError> {
        if window_radius <= 0.0 {
            return Err(SequenceError::InvalidParameter("window_radius must be positive".into()));
        }
        if points.windows(2).any(|w| w[1] <= w[0]) {
            return Err(SequenceError::InvalidParameter(
                "explicit points must be strictly increasing".into(),
            ));
        }
        Ok(PointSet1D { kind: Kind1D::Explicit { points }, window_radius })
    }

    /// The periodic set `{kp + o : k ∈ Z, o ∈ offsets}` with offsets in
    /// `[0, p)`.
    pub fn periodic(p: f64, offsets: Vec<f64>, window_radius: f64) -> Result<Self, SequenceError> {
        if !(p > 0.0) {
            return Err(SequenceError::InvalidParameter(format!("period must be positive, got {p}")));
        }
        if offsets.is_empty() {
            return Err(SequenceError::InvalidParameter("need at least one offset".into()));
        }
        if offsets.iter().any(|&o| !(0.0..p).contains(&o)) {
            return Err(SequenceError::InvalidParameter("offsets must lie in [0, p)".into()));
        }
        let mut sorted = offsets;
        sorted.sort_by(|x, y| x.partial_cmp(y).unwrap());
        if sorted.windows(2).any(|w| w[1] == w[0]) {
            return Err(SequenceError::InvalidParameter("offsets must be distinct".into()));
        }
        Ok(PointSet1D { kind: Kind1D::Periodic { p, offsets: sorted }, window_radius })
    }

    /// The lattice `ρZ` (a periodic set with a single offset).
    pub fn lattice(rho: f64, window_radius: f64) -> Result<Self, SequenceError> {
        Self::periodic(rho, vec![0.0], window_radius)
    }

    /// The lattice `ρZ + shift`.
    pub fn shifted_lattice(rho: f64, shift: f64, window_radius: f64) -> Result<Self, SequenceError> {
        Self::periodic(rho, vec![shift.rem_euclid(rho)], window_radius)
    }

    /// A jittered lattice `{ρn + η_n}` with `η_n` drawn uniformly from
    /// `[-jitter, jitter]` out of a per-index ChaCha stream; `jitter < ρ/2`
    /// keeps the set separated. Point `n` is identical no matter which
    /// window materializes it.
    pub fn jittered(rho: f64, jitter: f64, seed: u64, window_radius: f64) -> Result<Self, SequenceError> {
        if !(rho > 0.0) {
            return Err(SequenceError::InvalidParameter(format!("rho must be positive, got {rho}")));
        }
        if !(jitter >= 0.0 && jitter < rho / 2.0) {
            return Err(SequenceError::InvalidParameter(format!(
                "jitter must satisfy 0 ≤ jitter < ρ/2, got {jitter} for ρ = {rho}"
            )));
        }
        Ok(PointSet1D { kind: Kind1D::Jittered { rho, jitter, seed }, window_radius })
    }

    /// Declared validity radius of the representation.
    pub fn window_radius(&self) -> f64 {
        self.window_radius
    }

    /// Exact Beurling density when the representation pins it down
    /// (`k/p` for periodic sets, `1/ρ` for jittered lattices).
    pub fn exact_density(&self) -> Option<f64> {
        match &self.kind {
            Kind1D::Explicit { .. } => None,
            Kind1D::Periodic { p, offsets } => Some(offsets.len() as f64 / p),
            Kind1D::Jittered { rho, .. } => Some(1.0 / rho),
        }
    }

    fn jitter_at(rho: f64, jitter: f64, seed: u64, n: i64) -> f64 {
        let _ = rho;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(n as u64);
        // Top 53 bits → [0,1); explicit arithmetic keeps this bit-stable
        // across platforms.
        let u = (rng.next_u64() >> 11) as f64 * (1.0 / 9007199254740992.0);
        (2.0 * u - 1.0) * jitter
    }

    /// The points of the set inside `[lo, hi]`, sorted.
    pub fn points_in(&self, lo: f64, hi: f64) -> Vec<f64> {
        match &self.kind {
            Kind1D::Explicit { points } => {
                points.iter().copied().filter(|&x| x >= lo && x <= hi).collect()
            }
            Kind1D::Periodic { p, offsets } => {
                let mut out = Vec::new();
                let k_lo = ((lo - p) / p).floor() as i64;
                let k_hi = ((hi + p) / p).ceil() as i64;
                for k in k_lo..=k_hi {
                    for &o in offsets {
                        let x = p * k as f64 + o;
                        if x >= lo && x <= hi {
                            out.push(x);
                        }
                    }
                }
                out.sort_by(|a, b| a.partial_cmp(b).unwrap());
                out
            }
            Kind1D::Jittered { rho, jitter, seed } => {
                let n_lo = ((lo - jitter) / rho).floor() as i64 - 1;
                let n_hi = ((hi + jitter) / rho).ceil() as i64 + 1;
                let mut out = Vec::new();
                for n in n_lo..=n_hi {
                    let x = rho * n as f64 + Self::jitter_at(*rho, *jitter, *seed, n);
                    if x >= lo && x <= hi {
                        out.push(x);
                    }
                }
                out.sort_by(|a, b| a.partial_cmp(b).unwrap());
                out
            }
        }
    }

    /// All points of the representation window.
    pub fn points_window(&self) -> Vec<f64> {
        self.points_in(-self.window_radius, self.window_radius)
    }

    /// Translates the set by `dx` (exactly, on the representation).
    pub fn translate(&self, dx: f64) -> PointSet1D {
        let kind = match &self.kind {
            Kind1D::Explicit { points } => {
                Kind1D::Explicit { points: points.iter().map(|x| x + dx).collect() }
            }
            Kind1D::Periodic { p, offsets } => {
                let mut moved: Vec<f64> = offsets.iter().map(|o| (o + dx).rem_euclid(*p)).collect();
                moved.sort_by(|a, b| a.partial_cmp(b).unwrap());
                Kind1D::Periodic { p: *p, offsets: moved }
            }
            Kind1D::Jittered { rho, jitter, seed } => {
                // Jitter streams are tied to indices; a translate becomes
                // explicit to stay faithful to "the same points, moved".
                let pts = self.points_window().iter().map(|x| x + dx).collect();
                return PointSet1D { kind: Kind1D::Explicit { points: pts }, window_radius: self.window_radius }
                    .tap_keep(*rho, *jitter, *seed);
            }
        };
        PointSet1D { kind, window_radius: self.window_radius }
    }

    fn tap_keep(self, _rho: f64, _jitter: f64, _seed: u64) -> PointSet1D {
        self
    }

    /// Scales the set by `c > 0` (used by the `Λ×αZ → Λ/α×Z` rescaling).
    pub fn scale(&self, c: f64) -> PointSet1D {
        assert!(c > 0.0, "scale factor must be positive, got {c}");
        let kind = match &self.kind {
            Kind1D::Explicit { points } => {
                Kind1D::Explicit { points: points.iter().map(|x| x * c).collect() }
            }
            Kind1D::Periodic { p, offsets } => Kind1D::Periodic {
                p: p * c,
                offsets: offsets.iter().map(|o| o * c).collect(),
            },
            Kind1D::Jittered { rho, jitter, seed } => {
                Kind1D::Jittered { rho: rho * c, jitter: jitter * c, seed: *seed }
            }
        };
        PointSet1D { kind, window_radius: self.window_radius * c }
    }

    /// Infimum of consecutive gaps over the representation window (exact for
    /// periodic sets: the offset gaps including the wrap-around one).
    pub fn separation(&self) -> Result<f64, SequenceError> {
        if let Kind1D::Periodic { p, offsets } = &self.kind {
            if offsets.len() == 1 {
                return Ok(*p);
            }
            let mut best = f64::INFINITY;
            for w in offsets.windows(2) {
                best = best.min(w[1] - w[0]);
            }
            best = best.min(p - offsets[offsets.len() - 1] + offsets[0]);
            return Ok(best);
        }
        let pts = self.points_window();
        if pts.len() < 2 {
            return Err(SequenceError::TooFewPoints { needed: 2, found: pts.len() });
        }
        Ok(pts.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min))
    }
}

/// A density estimate with its whole radius profile.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityEstimate {
    /// The estimate at the largest radius.
    pub value: f64,
    /// Radii used.
    pub r_used: Vec<f64>,
    /// Estimate per radius.
    pub estimates: Vec<f64>,
    /// Exact limit when the representation provides one.
    pub exact: Option<f64>,
}

fn count_in_half_open(pts: &[f64], lo: f64, hi: f64) -> usize {
    // Membership in [lo, hi) with a relative edge tolerance: points within
    // EDGE_TOL·scale of `lo` count as inside, within the same of `hi` as
    // outside.
    let scale = 1.0 + lo.abs().max(hi.abs());
    let eps = EDGE_TOL * scale;
    let start = pts.partition_point(|&x| x < lo - eps);
    let stop = pts.partition_point(|&x| x < hi - eps);
    stop.saturating_sub(start)
}

fn sliding_extreme(pts: &[f64], r: f64, span: f64, minimize: bool) -> f64 {
    // The count over [x, x+r) changes only when an endpoint crosses a point,
    // so extremes are attained with a window edge on a point: candidates
    // x = λ_j (point enters at the left edge) and x = λ_j + ε ≈ just past a
    // point (handled by the edge tolerance of the counting rule applied at
    // x = λ_j - r + r... i.e. windows ending just past λ_j).
    let mut best = if minimize { f64::INFINITY } else { f64::NEG_INFINITY };
    let lo_limit = -span;
    let hi_limit = span - r;
    let mut consider = |x: f64| {
        if x < lo_limit || x > hi_limit {
            return;
        }
        let c = count_in_half_open(pts, x, x + r) as f64;
        if minimize {
            best = best.min(c);
        } else {
            best = best.max(c);
        }
    };
    for &p in pts {
        consider(p); // window starting on a point
        consider(p - r); // window ending on a point (the point just exits)
        let scale = 1.0 + p.abs();
        consider(p + 2.0 * EDGE_TOL * scale); // just past a point
        consider(p - r + 2.0 * EDGE_TOL * scale);
    }
    // Also a couple of plain anchors in case the point list is empty inside
    // the admissible range.
    consider(lo_limit);
    consider(0.0_f64.min(hi_limit).max(lo_limit));
    best
}

fn density_profile(
    set: &PointSet1D,
    r_list: &[f64],
    minimize: bool,
) -> Result<DensityEstimate, SequenceError> {
    if r_list.is_empty() || r_list.windows(2).any(|w| w[1] <= w[0]) || r_list[0] <= 0.0 {
        return Err(SequenceError::InvalidParameter("r_list must be positive and increasing".into()));
    }
    let r_max = *r_list.last().unwrap();
    if r_max > set.window_radius() / 2.0 {
        return Err(SequenceError::Coverage { window: set.window_radius(), requested: r_max });
    }
    let pts = set.points_window();
    let mut estimates = Vec::with_capacity(r_list.len());
    for &r in r_list {
        let extreme = sliding_extreme(&pts, r, set.window_radius(), minimize);
        estimates.push(extreme / r);
    }
    Ok(DensityEstimate {
        value: *estimates.last().unwrap(),
        r_used: r_list.to_vec(),
        estimates,
        exact: set.exact_density(),
    })
}

/// Lower Beurling density: `inf_x card(Λ ∩ [x, x+r))/r` per radius, sliding
/// the window over the representation.
pub fn lower_density(set: &PointSet1D, r_list: &[f64]) -> Result<DensityEstimate, SequenceError> {
    density_profile(set, r_list, true)
}

/// Upper Beurling density: `sup_x card(Λ ∩ [x, x+r))/r` per radius.
pub fn upper_density(set: &PointSet1D, r_list: &[f64]) -> Result<DensityEstimate, SequenceError> {
    density_profile(set, r_list, false)
}

/// Enumerates the set against the integer grid: with the point nearest the
/// origin given index 0 and consecutive points consecutive indices, returns
/// `δ_n = λ_{n+shift} - n` over the representation window. Errors when some
/// `|δ_n|` exceeds the enumeration bound 10.
pub fn enumerate_deltas(set: &PointSet1D, shift: i64) -> Result<Vec<f64>, SequenceError> {
    const BOUND: f64 = 10.0;
    let pts = set.points_window();
    if pts.len() < 2 {
        return Err(SequenceError::TooFewPoints { needed: 2, found: pts.len() });
    }
    let origin = pts
        .iter()
        .enumerate()
        .min_by(|(_, a), (_, b)| a.abs().partial_cmp(&b.abs()).unwrap())
        .map(|(i, _)| i)
        .unwrap() as i64;
    let mut deltas = Vec::new();
    let mut worst: f64 = 0.0;
    // λ_k sits at position origin + k; δ_n needs λ_{n+shift}.
    for (pos, &x) in pts.iter().enumerate() {
        let k = pos as i64 - origin; // this point is λ_k
        let n = k - shift; // it serves index n = k - shift
        let delta = x - n as f64;
        worst = worst.max(delta.abs());
        deltas.push(delta);
    }
    if worst > BOUND {
        return Err(SequenceError::NotEnumerable { bound: BOUND, worst });
    }
    Ok(deltas)
}

/// One period of `δ_n` for a periodic set of density exactly 1 (period equal
/// to the offset count), enumerated like [`enumerate_deltas`]; `None` for
/// other representations. Lets criterion averages be evaluated exactly.
pub fn delta_pattern(set: &PointSet1D, shift: i64) -> Option<Vec<f64>> {
    if let Kind1D::Periodic { p, offsets } = &set.kind {
        let q = offsets.len();
        if (p - q as f64).abs() > 1e-9 {
            return None;
        }
        // Consistent with enumerate_deltas: reproduce its indexing on a
        // window and cut one period.
        let deltas = enumerate_deltas(set, shift).ok()?;
        if deltas.len() < q {
            return None;
        }
        let start = deltas.len() / 2;
        Some(deltas[start..start + q].to_vec())
    } else {
        None
    }
}

/// A point configuration in the plane.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet2D {
    kind: Kind2D,
    window_radius: f64,
}

#[derive(Debug, Clone, PartialEq)]
enum Kind2D {
    /// Integer span of two generators.
    Lattice { g1: (f64, f64), g2: (f64, f64) },
    /// The product `αZ × βZ`.
    Product { alpha: f64, beta: f64 },
    /// Explicit points.
    Explicit { points: Vec<(f64, f64)> },
}

impl PointSet2D {
    /// The lattice spanned by `g1, g2` (must be linearly independent).
    pub fn lattice(g1: (f64, f64), g2: (f64, f64), window_radius: f64) -> Result<Self, SequenceError> {
        let det = g1.0 * g2.1 - g1.1 * g2.0;
        if det.abs() < 1e-12 {
            return Err(SequenceError::InvalidParameter("lattice generators are dependent".into()));
        }
        Ok(PointSet2D { kind: Kind2D::Lattice { g1, g2 }, window_radius })
    }

    /// The product set `αZ × βZ`.
    pub fn product(alpha: f64, beta: f64, window_radius: f64) -> Result<Self, SequenceError> {
        if !(alpha > 0.0 && beta > 0.0) {
            return Err(SequenceError::InvalidParameter("product steps must be positive".into()));
        }
        Ok(PointSet2D { kind: Kind2D::Product { alpha, beta }, window_radius })
    }

    /// An explicit planar point list.
    pub fn explicit(points: Vec<(f64, f64)>, window_radius: f64) -> Result<Self, SequenceError> {
        if window_radius <= 0.0 {
            return Err(SequenceError::InvalidParameter("window_radius must be positive".into()));
        }
        Ok(PointSet2D { kind: Kind2D::Explicit { points }, window_radius })
    }

    /// Declared validity radius.
    pub fn window_radius(&self) -> f64 {
        self.window_radius
    }

    /// Exact planar density when available (`1/|det|` for lattices,
    /// `1/(αβ)` for products).
    pub fn exact_density(&self) -> Option<f64> {
        match &self.kind {
            Kind2D::Lattice { g1, g2 } => Some(1.0 / (g1.0 * g2.1 - g1.1 * g2.0).abs()),
            Kind2D::Product { alpha, beta } => Some(1.0 / (alpha * beta)),
            Kind2D::Explicit { .. } => None,
        }
    }

    /// Points inside the centered square of half-side `half`.
    pub fn points_in_square(&self, half: f64) -> Vec<(f64, f64)> {
        match &self.kind {
            Kind2D::Explicit { points } => points
                .iter()
                .copied()
                .filter(|&(x, y)| x.abs() <= half && y.abs() <= half)
                .collect(),
            Kind2D::Product { alpha, beta } => {
                let mut out = Vec::new();
                let i_max = (half / alpha).floor() as i64;
                let j_max = (half / beta).floor() as i64;
                for i in -i_max..=i_max {
                    for j in -j_max..=j_max {
                        out.push((alpha * i as f64, beta * j as f64));
                    }
                }
                out
            }
            Kind2D::Lattice { g1, g2 } => {
                // Conservative index bounds from the inverse generator matrix.
                let det = g1.0 * g2.1 - g1.1 * g2.0;
                let inv = [
                    (g2.1 / det, -g2.0 / det),
                    (-g1.1 / det, g1.0 / det),
                ];
                let corner_bound = |row: (f64, f64)| -> f64 {
                    (row.0.abs() + row.1.abs()) * half
                };
                let i_max = corner_bound(inv[0]).ceil() as i64 + 1;
                let j_max = corner_bound(inv[1]).ceil() as i64 + 1;
                let mut out = Vec::new();
                for i in -i_max..=i_max {
                    for j in -j_max..=j_max {
                        let x = g1.0 * i as f64 + g2.0 * j as f64;
                        let y = g1.1 * i as f64 + g2.1 * j as f64;
                        if x.abs() <= half && y.abs() <= half {
                            out.push((x, y));
                        }
                    }
                }
                out
            }
        }
    }

    /// Applies the shear `(x, y) ↦ (x, y + σx/π)` exactly to the
    /// representation (lattices map to lattices; the shear has determinant
    /// 1, so exact densities survive unchanged).
    pub fn shear(&self, sigma: f64) -> PointSet2D {
        let s = sigma / std::f64::consts::PI;
        let kind = match &self.kind {
            Kind2D::Lattice { g1, g2 } => Kind2D::Lattice {
                g1: (g1.0, g1.1 + s * g1.0),
                g2: (g2.0, g2.1 + s * g2.0),
            },
            Kind2D::Product { alpha, beta } => {
                if sigma == 0.0 {
                    Kind2D::Product { alpha: *alpha, beta: *beta }
                } else {
                    Kind2D::Lattice { g1: (*alpha, s * alpha), g2: (0.0, *beta) }
                }
            }
            Kind2D::Explicit { points } => Kind2D::Explicit {
                points: points.iter().map(|&(x, y)| (x, y + s * x)).collect(),
            },
        };
        PointSet2D { kind, window_radius: self.window_radius }
    }

    /// Lower planar density: `inf_z card(S ∩ B_r(z)) / (πr²)` per radius,
    /// sliding the ball center over a grid inside the representation window.
    pub fn planar_lower_density(&self, r_list: &[f64]) -> Result<DensityEstimate, SequenceError> {
        if r_list.is_empty() || r_list.windows(2).any(|w| w[1] <= w[0]) || r_list[0] <= 0.0 {
            return Err(SequenceError::InvalidParameter("r_list must be positive and increasing".into()));
        }
        let r_max = *r_list.last().unwrap();
        if r_max > self.window_radius / 2.0 {
            return Err(SequenceError::Coverage { window: self.window_radius, requested: r_max });
        }
        let pts = self.points_in_square(self.window_radius);
        let mut estimates = Vec::with_capacity(r_list.len());
        for &r in r_list {
            let center_span = self.window_radius - r;
            let step = (r / 8.0).max(0.25);
            let n_steps = (center_span / step).floor() as i64;
            let mut min_count = usize::MAX;
            for i in -n_steps..=n_steps {
                for j in -n_steps..=n_steps {
                    let cx = i as f64 * step;
                    let cy = j as f64 * step;
                    let r2 = r * r;
                    let count = pts
                        .iter()
                        .filter(|&&(x, y)| {
                            let dx = x - cx;
                            let dy = y - cy;
                            dx * dx + dy * dy <= r2
                        })
                        .count();
                    min_count = min_count.min(count);
                }
            }
            estimates.push(min_count as f64 / (std::f64::consts::PI * r * r));
        }
        Ok(DensityEstimate {
            value: *estimates.last().unwrap(),
            r_used: r_list.to_vec(),
            estimates,
            exact: self.exact_density(),
        })
    }
}
