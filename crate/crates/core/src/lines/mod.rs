//! The 27 lines of a smooth cubic surface, computed numerically, and
//! Eckardt points detected as clusters of three concurrent lines.
//!
//! This is the floating-point cross-check for the exact pentahedron
//! vertex criterion: lines are found by homotopy continuation in a
//! random chart, pairwise intersections are extracted with small SVDs,
//! and intersection points are clustered. A cluster incident to three
//! lines is an Eckardt point. Everything is driven by one seed, so runs
//! are reproducible; `cross_validate` ties the exact and numeric counts
//! together.

mod tracker;

pub use tracker::{line_system, track_all, ChartPoly};

use nalgebra::Matrix4;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::rat_to_f64;
use crate::invariants::SylvesterPoint;
use crate::pentahedron::{eckardt_vertices, to_cubic_p3, CubicForm3};
use crate::{Error, Result};

/// Complex double-precision scalar used throughout the numeric module.
pub type C64 = nalgebra::Complex<f64>;

fn inner(x: &[C64; 4], y: &[C64; 4]) -> C64 {
    (0..4).map(|k| x[k] * y[k].conj()).sum()
}

fn norm4(x: &[C64; 4]) -> f64 {
    inner(x, x).re.sqrt()
}

/// Chordal distance between unit vectors regarded as projective points:
/// `sqrt(2 - 2|<x,y>|)`, insensitive to the phase of either argument.
fn proj_distance(x: &[C64; 4], y: &[C64; 4]) -> f64 {
    (2.0 - 2.0 * inner(x, y).norm()).max(0.0).sqrt()
}

fn c64_json(z: C64) -> serde_json::Value {
    serde_json::json!([z.re, z.im])
}

fn point_json(x: &[C64; 4]) -> serde_json::Value {
    serde_json::Value::Array(x.iter().map(|z| c64_json(*z)).collect())
}

/// A cubic form on P^3 with complex coefficients, stored densely over
/// the 20 monomials in `CubicForm3::monomial_order`.
#[derive(Debug, Clone)]
pub struct ComplexCubic {
    coeffs: [C64; 20],
}

impl ComplexCubic {
    pub fn from_form(f: &CubicForm3) -> Self {
        let rats = f.coefficients();
        let coeffs = std::array::from_fn(|k| C64::new(rat_to_f64(&rats[k]), 0.0));
        ComplexCubic { coeffs }
    }

    pub fn coefficients(&self) -> [C64; 20] {
        self.coeffs
    }

    /// Rescales so the largest coefficient magnitude is 1; residual
    /// thresholds assume this normalization.
    pub fn normalized(&self) -> Self {
        let max = self.coeffs.iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!(max > 0.0, "zero cubic");
        let coeffs = std::array::from_fn(|k| self.coeffs[k] / max);
        ComplexCubic { coeffs }
    }

    pub fn eval(&self, x: &[C64; 4]) -> C64 {
        let mut pw = [[C64::new(1.0, 0.0); 4]; 4];
        for (var, p) in pw.iter_mut().enumerate() {
            p[1] = x[var];
            p[2] = x[var] * x[var];
            p[3] = p[2] * x[var];
        }
        CubicForm3::monomial_order()
            .iter()
            .zip(self.coeffs.iter())
            .map(|(e, c)| {
                *c * pw[0][e[0] as usize]
                    * pw[1][e[1] as usize]
                    * pw[2][e[2] as usize]
                    * pw[3][e[3] as usize]
            })
            .sum()
    }

    /// The composed cubic `x -> f(M x)`.
    pub fn compose(&self, m: &Matrix4<C64>) -> Self {
        let monos = CubicForm3::monomial_order();
        let index_of =
            |e: [u32; 4]| -> usize { monos.iter().position(|x| *x == e).expect("cubic monomial") };
        let mut out = [C64::new(0.0, 0.0); 20];
        for (e, c) in monos.iter().zip(self.coeffs.iter()) {
            if c.norm() == 0.0 {
                continue;
            }
            // The variables of this monomial, with multiplicity.
            let mut vars = Vec::with_capacity(3);
            for (v, &exp) in e.iter().enumerate() {
                for _ in 0..exp {
                    vars.push(v);
                }
            }
            for j0 in 0..4 {
                for j1 in 0..4 {
                    for j2 in 0..4 {
                        let coeff = *c * m[(vars[0], j0)] * m[(vars[1], j1)] * m[(vars[2], j2)];
                        let mut t = [0u32; 4];
                        t[j0] += 1;
                        t[j1] += 1;
                        t[j2] += 1;
                        out[index_of(t)] += coeff;
                    }
                }
            }
        }
        ComplexCubic { coeffs: out }
    }

    /// Coefficients `(c0, c1, c2, c3)` of the binary cubic
    /// `f(s*u0 + t*u1) = sum c_k s^(3-k) t^k`, recovered from four
    /// evaluations.
    pub fn restrict_to_span(&self, u0: &[C64; 4], u1: &[C64; 4]) -> [C64; 4] {
        let add = |a: &[C64; 4], b: &[C64; 4], sign: f64| -> [C64; 4] {
            std::array::from_fn(|k| a[k] + b[k] * C64::new(sign, 0.0))
        };
        let c0 = self.eval(u0);
        let c3 = self.eval(u1);
        let even = self.eval(&add(u0, u1, 1.0));
        let odd = self.eval(&add(u0, u1, -1.0));
        let half = C64::new(0.5, 0.0);
        let c1 = (even - odd) * half - c3;
        let c2 = (even + odd) * half - c0;
        [c0, c1, c2, c3]
    }

    /// Largest coefficient magnitude of the restriction of the cubic to
    /// the line; below 1e-8 (for a normalized cubic and unit line
    /// points) the line is accepted as lying on the surface.
    pub fn line_residual(&self, line: &ComplexLine) -> f64 {
        let [a, b] = line.points();
        self.restrict_to_span(&a, &b)
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }
}

/// A line in complex P^3: two orthonormal representative points and the
/// unit Plücker vector, phase-canonicalized for deterministic ordering.
#[derive(Debug, Clone)]
pub struct ComplexLine {
    points: [[C64; 4]; 2],
    plucker: [C64; 6],
}

impl ComplexLine {
    /// Builds the line through two projective points; the second is
    /// orthonormalized against the first, which also rejects coincident
    /// inputs.
    pub fn from_points(a: [C64; 4], b: [C64; 4]) -> Result<Self> {
        let na = norm4(&a);
        let nb = norm4(&b);
        if na == 0.0 || nb == 0.0 {
            return Err(Error::CoincidentPoints);
        }
        let e0: [C64; 4] = std::array::from_fn(|k| a[k] / na);
        let overlap = inner(&b, &e0);
        let mut w: [C64; 4] = std::array::from_fn(|k| b[k] - e0[k] * overlap);
        let nw = norm4(&w);
        if nw < 1e-12 * nb {
            return Err(Error::CoincidentPoints);
        }
        for z in &mut w {
            *z /= nw;
        }
        let pairs = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
        let mut plucker: [C64; 6] = std::array::from_fn(|k| {
            e0[pairs[k].0] * w[pairs[k].1] - e0[pairs[k].1] * w[pairs[k].0]
        });
        let norm: f64 = plucker.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for z in &mut plucker {
            *z /= norm;
        }
        // Canonical phase: rotate so the largest entry is real positive.
        let (lead, _) = plucker
            .iter()
            .enumerate()
            .max_by(|(_, x), (_, y)| x.norm().partial_cmp(&y.norm()).unwrap())
            .unwrap();
        let phase = plucker[lead] / plucker[lead].norm();
        for z in &mut plucker {
            *z /= phase;
        }
        Ok(ComplexLine {
            points: [e0, w],
            plucker,
        })
    }

    pub fn points(&self) -> [[C64; 4]; 2] {
        self.points
    }

    pub fn plucker(&self) -> &[C64; 6] {
        &self.plucker
    }

    /// Residual of the Plücker quadric `p01 p23 - p02 p13 + p03 p12`;
    /// identically zero for decomposable vectors up to rounding.
    pub fn quadric_residual(&self) -> f64 {
        let p = &self.plucker;
        (p[0] * p[5] - p[1] * p[4] + p[2] * p[3]).norm()
    }

    /// Phase-insensitive chordal distance between unit Plücker vectors;
    /// below 1e-6 two tracked lines are considered the same.
    pub fn plucker_distance(&self, other: &ComplexLine) -> f64 {
        let dot: C64 = (0..6)
            .map(|k| self.plucker[k] * other.plucker[k].conj())
            .sum();
        (2.0 - 2.0 * dot.norm()).max(0.0).sqrt()
    }

    /// Distance from a unit point to the line (norm of the component
    /// orthogonal to the line's span).
    pub fn distance_to_point(&self, x: &[C64; 4]) -> f64 {
        let [e0, e1] = &self.points;
        let c0 = inner(x, e0);
        let c1 = inner(x, e1);
        let residual: [C64; 4] = std::array::from_fn(|k| x[k] - e0[k] * c0 - e1[k] * c1);
        norm4(&residual)
    }

    /// Sort key: the canonical Plücker vector flattened to real pairs.
    pub fn canonical_key(&self) -> [f64; 12] {
        std::array::from_fn(|k| {
            let z = self.plucker[k / 2];
            if k % 2 == 0 {
                z.re
            } else {
                z.im
            }
        })
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "points": [point_json(&self.points[0]), point_json(&self.points[1])],
            "plucker": self.plucker.iter().map(|z| c64_json(*z)).collect::<Vec<_>>(),
            "quadric_residual": self.quadric_residual(),
        })
    }
}

/// A detected Eckardt point: a cluster of pairwise line intersections
/// with at least three incident lines.
#[derive(Debug, Clone)]
pub struct EckardtCluster {
    /// Unit-normalized representative of the common point.
    pub point: [C64; 4],
    /// Indices (into the 27-line list) of the incident lines, sorted.
    pub lines: Vec<usize>,
    /// Largest pairwise distance among the clustered intersection points.
    pub spread: f64,
    /// Largest distance from the point to any incident line.
    pub max_line_distance: f64,
    /// Set when another cluster lies within ten clustering radii — the
    /// two are kept separate but flagged.
    pub ill_conditioned: bool,
}

impl EckardtCluster {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "point": point_json(&self.point),
            "lines": self.lines,
            "spread": self.spread,
            "max_line_distance": self.max_line_distance,
            "ill_conditioned": self.ill_conditioned,
        })
    }
}

/// Knobs of the homotopy tracker. `from_seed` fills in the defaults and
/// derives the gamma constant from the seed.
#[derive(Debug, Clone)]
pub struct TrackerConfig {
    /// Number of start paths; the total-degree start system has 81.
    pub paths: usize,
    /// Initial (and maximum) step length in t.
    pub step_init: f64,
    /// Smallest step length before a path is declared stalled.
    pub step_min: f64,
    /// Newton contraction threshold for corrector and polish.
    pub corrector_tol: f64,
    /// Norm beyond which a path is declared divergent.
    pub divergence: f64,
    /// Below this t the step length is tied to t itself.
    pub endgame_t: f64,
    pub seed: u64,
    /// Random unit constant multiplying the start system, which keeps
    /// paths clear of singularities for almost every value.
    pub gamma: C64,
}

impl TrackerConfig {
    pub fn from_seed(seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let gamma = C64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU));
        TrackerConfig {
            paths: 81,
            step_init: 0.05,
            step_min: 1e-7,
            corrector_tol: 1e-12,
            divergence: 1e8,
            endgame_t: 0.1,
            seed,
            gamma,
        }
    }

    pub fn check(&self) -> Result<()> {
        if self.paths != 81 {
            return Err(Error::InvalidInput(format!(
                "total-degree tracking of the chart system uses 81 paths, got {}",
                self.paths
            )));
        }
        let positive = self.step_init > 0.0
            && self.step_min > 0.0
            && self.step_min < self.step_init
            && self.corrector_tol > 0.0
            && self.divergence > 1.0;
        if !positive {
            return Err(Error::InvalidInput(
                "tracker tolerances must be positive with step_min < step_init".into(),
            ));
        }
        if !(0.0 < self.endgame_t && self.endgame_t < 1.0) {
            return Err(Error::InvalidInput(
                "endgame start must lie strictly between 0 and 1".into(),
            ));
        }
        Ok(())
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "paths": self.paths,
            "step_init": self.step_init,
            "step_min": self.step_min,
            "corrector_tol": self.corrector_tol,
            "divergence": self.divergence,
            "endgame_t": self.endgame_t,
            "seed": self.seed,
            "gamma": c64_json(self.gamma),
        })
    }
}

struct IntersectionEvent {
    point: [C64; 4],
    pair: (usize, usize),
    sigma: f64,
}

/// Closest-approach test and intersection point for two lines, from the
/// SVD of the 4x4 matrix whose columns are the four representative
/// points: a small fourth singular value certifies a common point, and
/// the corresponding null vector yields its coordinates.
fn intersect(a: &ComplexLine, b: &ComplexLine) -> (f64, [C64; 4]) {
    let [a0, a1] = a.points();
    let [b0, b1] = b.points();
    let cols = [a0, a1, b0, b1];
    let m = Matrix4::from_fn(|r, c| if c < 2 { cols[c][r] } else { -cols[c][r] });
    let svd = m.svd(false, true);
    let (mut kmin, mut smin) = (0usize, f64::INFINITY);
    for (k, &s) in svd.singular_values.iter().enumerate() {
        if s < smin {
            smin = s;
            kmin = k;
        }
    }
    let vt = svd.v_t.expect("requested V^H");
    let c: [C64; 4] = std::array::from_fn(|j| vt[(kmin, j)].conj());
    let mut y: [C64; 4] = std::array::from_fn(|k| a0[k] * c[0] + a1[k] * c[1]);
    let n = norm4(&y);
    if n > 1e-8 {
        for z in &mut y {
            *z /= n;
        }
    }
    (smin, y)
}

/// Clusters pairwise line intersections (single linkage at radius
/// `tol`) and returns the clusters incident to at least three lines —
/// the numeric Eckardt points. Clusters closer than ten radii to one
/// another are flagged ill-conditioned but both retained.
pub fn eckardt_numeric(lines: &[ComplexLine], tol: f64) -> Result<Vec<EckardtCluster>> {
    if lines.len() != 27 {
        return Err(Error::InvalidInput(format!(
            "Eckardt clustering expects the 27 lines, got {}",
            lines.len()
        )));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidInput("tolerance must be positive".into()));
    }
    let mut events: Vec<IntersectionEvent> = Vec::new();
    for i in 0..lines.len() {
        for j in (i + 1)..lines.len() {
            let (sigma, point) = intersect(&lines[i], &lines[j]);
            if sigma < tol && norm4(&point) > 0.5 {
                events.push(IntersectionEvent {
                    point,
                    pair: (i, j),
                    sigma,
                });
            }
        }
    }

    // Single-linkage union-find over the intersection points.
    let mut parent: Vec<usize> = (0..events.len()).collect();
    fn find(parent: &mut [usize], i: usize) -> usize {
        if parent[i] != i {
            let root = find(parent, parent[i]);
            parent[i] = root;
        }
        parent[i]
    }
    for i in 0..events.len() {
        for j in (i + 1)..events.len() {
            if proj_distance(&events[i].point, &events[j].point) < tol {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri] = rj;
                }
            }
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for i in 0..events.len() {
        let root = find(&mut parent, i);
        groups.entry(root).or_default().push(i);
    }

    let mut clusters: Vec<EckardtCluster> = Vec::new();
    for members in groups.values() {
        let mut incident: Vec<usize> = members
            .iter()
            .flat_map(|&k| [events[k].pair.0, events[k].pair.1])
            .collect();
        incident.sort_unstable();
        incident.dedup();
        if incident.len() < 3 {
            continue;
        }
        // Representative: the most reliable event, refined by averaging
        // all phase-aligned member points.
        let rep = members
            .iter()
            .min_by(|&&x, &&y| events[x].sigma.partial_cmp(&events[y].sigma).unwrap())
            .copied()
            .unwrap();
        let rep_point = events[rep].point;
        let mut mean = [C64::new(0.0, 0.0); 4];
        for &k in members {
            let overlap = inner(&rep_point, &events[k].point);
            let phase = if overlap.norm() > 0.0 {
                overlap / overlap.norm()
            } else {
                C64::new(1.0, 0.0)
            };
            for (m, p) in mean.iter_mut().zip(events[k].point.iter()) {
                *m += *p * phase;
            }
        }
        let n = norm4(&mean);
        let point: [C64; 4] = std::array::from_fn(|k| mean[k] / n);
        let mut spread = 0.0f64;
        for &x in members {
            for &y in members {
                spread = spread.max(proj_distance(&events[x].point, &events[y].point));
            }
        }
        let max_line_distance = incident
            .iter()
            .map(|&k| lines[k].distance_to_point(&point))
            .fold(0.0, f64::max);
        clusters.push(EckardtCluster {
            point,
            lines: incident,
            spread,
            max_line_distance,
            ill_conditioned: false,
        });
    }

    clusters.sort_by(|a, b| {
        let ka: Vec<f64> = a.point.iter().flat_map(|z| [z.re, z.im]).collect();
        let kb: Vec<f64> = b.point.iter().flat_map(|z| [z.re, z.im]).collect();
        ka.partial_cmp(&kb).unwrap()
    });
    for i in 0..clusters.len() {
        for j in (i + 1)..clusters.len() {
            if proj_distance(&clusters[i].point, &clusters[j].point) < 10.0 * tol {
                clusters[i].ill_conditioned = true;
                clusters[j].ill_conditioned = true;
            }
        }
    }
    Ok(clusters)
}

/// One exact vertex matched (or not) against the numeric clusters.
#[derive(Debug, Clone)]
pub struct VertexMatch {
    pub vertex: (usize, usize),
    pub distance: f64,
    pub matched: bool,
}

/// Outcome of running the exact vertex criterion and the numeric
/// line-clustering detector on the same surface.
#[derive(Debug, Clone)]
pub struct CrossReport {
    pub exact_count: usize,
    pub numeric_count: usize,
    pub counts_match: bool,
    pub vertex_matches: Vec<VertexMatch>,
    /// Largest |f| over cluster points, for the normalized cubic.
    pub max_cluster_residual: f64,
    pub all_matched: bool,
}

impl CrossReport {
    pub fn ok(&self) -> bool {
        self.counts_match && self.all_matched && self.max_cluster_residual < 1e-8
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "exact_count": self.exact_count,
            "numeric_count": self.numeric_count,
            "counts_match": self.counts_match,
            "vertex_matches": self.vertex_matches.iter().map(|m| serde_json::json!({
                "vertex": [m.vertex.0, m.vertex.1],
                "distance": m.distance,
                "matched": m.matched,
            })).collect::<Vec<_>>(),
            "max_cluster_residual": self.max_cluster_residual,
            "ok": self.ok(),
        })
    }
}

/// Runs the exact and numeric Eckardt detectors on one nondegenerate
/// Sylvester surface and compares: counts must agree, and every exact
/// vertex image must coincide with some cluster within `tol`.
pub fn cross_validate(s: &SylvesterPoint, cfg: &TrackerConfig, tol: f64) -> Result<CrossReport> {
    let vertices = eckardt_vertices(s)?;
    let form = to_cubic_p3(s);
    let lines = track_all(&form, cfg)?;
    let clusters = eckardt_numeric(&lines, tol)?;
    let f = ComplexCubic::from_form(&form).normalized();

    let max_cluster_residual = clusters
        .iter()
        .map(|c| f.eval(&c.point).norm())
        .fold(0.0, f64::max);

    let vertex_matches: Vec<VertexMatch> = vertices
        .iter()
        .map(|v| {
            let coords = v.p3_coords();
            let x: [C64; 4] = std::array::from_fn(|k| C64::new(rat_to_f64(&coords[k]), 0.0));
            let n = norm4(&x);
            let unit: [C64; 4] = std::array::from_fn(|k| x[k] / n);
            let distance = clusters
                .iter()
                .map(|c| proj_distance(&unit, &c.point))
                .fold(f64::INFINITY, f64::min);
            VertexMatch {
                vertex: v.indices(),
                distance,
                matched: distance < tol,
            }
        })
        .collect();

    Ok(CrossReport {
        exact_count: vertices.len(),
        numeric_count: clusters.len(),
        counts_match: vertices.len() == clusters.len(),
        all_matched: vertex_matches.iter().all(|m| m.matched),
        vertex_matches,
        max_cluster_residual,
    })
}
