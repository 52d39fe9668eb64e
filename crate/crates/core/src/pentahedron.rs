//! Sylvester pentahedron combinatorics: the passage from a Sylvester form
//! to an honest cubic in P^3, the exact Eckardt-vertex criterion, the
//! classification of coefficient families, collinearity and
//! line-containment checks, and coefficient stabilizers inside S5.
//!
//! The pentahedron of a nondegenerate form has faces `pi_i = V(z_i)` (on
//! the hyperplane `sum z = 0`), edges `beta_ij` given by index pairs
//! `z_i = z_j = 0`, and vertices `A_ij` where three faces meet. The form
//! restricts to `(a_i - a_j) t^3` at `A_ij`, so the vertex is an Eckardt
//! point of the surface exactly when `a_i = a_j`.

use std::collections::BTreeMap;

use itertools::Itertools;
use num::{One, Zero};

use crate::arith::{rat_to_string, MultiPoly, Rat};
use crate::invariants::SylvesterPoint;
use crate::{Error, Result};

/// A homogeneous cubic form in `x0..x3`, stored sparsely. There are 20
/// degree-3 monomials in four variables; [`CubicForm3::coefficients`]
/// lists all 20 in descending lexicographic order (`x0^3` first,
/// `x3^3` last).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CubicForm3 {
    poly: MultiPoly,
}

impl CubicForm3 {
    pub fn new(poly: MultiPoly) -> Result<Self> {
        if poly.nvars() != 4 {
            return Err(Error::InvalidInput(format!(
                "cubic form must have 4 variables, got {}",
                poly.nvars()
            )));
        }
        if poly.is_zero() {
            return Err(Error::InvalidInput("cubic form is identically zero".into()));
        }
        if poly.terms().any(|(m, _)| m.total_degree() != 3) {
            return Err(Error::InvalidInput(
                "cubic form must be homogeneous of degree 3".into(),
            ));
        }
        Ok(CubicForm3 { poly })
    }

    pub fn poly(&self) -> &MultiPoly {
        &self.poly
    }

    /// Exponent vectors of the 20 cubic monomials in descending
    /// lexicographic order.
    pub fn monomial_order() -> Vec<[u32; 4]> {
        let mut out = Vec::with_capacity(20);
        for e0 in (0..=3u32).rev() {
            for e1 in (0..=(3 - e0)).rev() {
                for e2 in (0..=(3 - e0 - e1)).rev() {
                    out.push([e0, e1, e2, 3 - e0 - e1 - e2]);
                }
            }
        }
        debug_assert_eq!(out.len(), 20);
        out
    }

    /// The 20 coefficients in the order of [`CubicForm3::monomial_order`].
    pub fn coefficients(&self) -> Vec<Rat> {
        let by_exp: BTreeMap<Vec<u32>, Rat> = self
            .poly
            .terms()
            .map(|(m, c)| (m.exponents().to_vec(), c.clone()))
            .collect();
        Self::monomial_order()
            .iter()
            .map(|e| by_exp.get(e.as_slice()).cloned().unwrap_or_else(Rat::zero))
            .collect()
    }

    /// Whether the line through two distinct points of P^3 lies on the
    /// surface: the form restricted to `s*P + t*Q` must vanish as a
    /// binary cubic in `(s, t)`. Exact.
    pub fn contains_line(&self, p: &[Rat], q: &[Rat]) -> Result<bool> {
        check_projective_point(p, 4)?;
        check_projective_point(q, 4)?;
        if proportional(p, q) {
            return Err(Error::CoincidentPoints);
        }
        let map: Vec<MultiPoly> = (0..4)
            .map(|i| {
                MultiPoly::var(2, 0)
                    .scale(&p[i])
                    .add(&MultiPoly::var(2, 1).scale(&q[i]))
            })
            .collect();
        Ok(self.poly.substitute(&map).is_zero())
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "cubic_p3": self.coefficients().iter().map(rat_to_string).collect::<Vec<_>>(),
            "monomials": Self::monomial_order(),
        })
    }
}

/// Eliminates `z4 = -(x0+x1+x2+x3)` from a Sylvester form, producing the
/// cubic `a0 x0^3 + ... + a3 x3^3 - a4 (x0+x1+x2+x3)^3` in P^3.
pub fn to_cubic_p3(s: &SylvesterPoint) -> CubicForm3 {
    let a = s.coeffs();
    let mut poly = MultiPoly::zero(4);
    for (i, ai) in a.iter().enumerate().take(4) {
        poly = poly.add(&MultiPoly::var(4, i).pow(3).scale(ai));
    }
    let sum = (0..4).fold(MultiPoly::zero(4), |acc, i| acc.add(&MultiPoly::var(4, i)));
    poly = poly.sub(&sum.pow(3).scale(&a[4]));
    CubicForm3::new(poly).expect("a nonzero Sylvester form yields a nonzero cubic")
}

/// Vertex `A_ij` of the Sylvester pentahedron: the P^4 point with
/// `z_i = 1`, `z_j = -1`, all other coordinates zero. It lies on the
/// hyperplane `sum z = 0` and is the meet of the three faces `pi_k`,
/// `k` outside `{i, j}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PentVertex {
    i: usize,
    j: usize,
}

impl PentVertex {
    pub fn new(i: usize, j: usize) -> Self {
        assert!(
            i < 5 && j < 5 && i != j,
            "vertex needs two distinct indices < 5"
        );
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        PentVertex { i, j }
    }

    /// All ten vertices in lexicographic index order.
    pub fn all() -> Vec<PentVertex> {
        (0..5)
            .tuple_combinations()
            .map(|(i, j)| PentVertex::new(i, j))
            .collect()
    }

    pub fn indices(&self) -> (usize, usize) {
        (self.i, self.j)
    }

    pub fn p4_coords(&self) -> [Rat; 5] {
        let mut z: [Rat; 5] = std::array::from_fn(|_| Rat::zero());
        z[self.i] = Rat::one();
        z[self.j] = -Rat::one();
        z
    }

    /// Image under the chart `x_k = z_k` (k = 0..3) that eliminates `z4`:
    /// `e_i - e_j` for j < 4, and `e_i` when j = 4.
    pub fn p3_coords(&self) -> [Rat; 4] {
        let z = self.p4_coords();
        std::array::from_fn(|k| z[k].clone())
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "indices": [self.i, self.j],
            "p4": self.p4_coords().iter().map(rat_to_string).collect::<Vec<_>>(),
            "p3": self.p3_coords().iter().map(rat_to_string).collect::<Vec<_>>(),
        })
    }
}

/// Value of the Sylvester form `sum a_i z_i^3` at a P^4 point.
pub fn sylvester_eval(s: &SylvesterPoint, z: &[Rat; 5]) -> Rat {
    s.coeffs()
        .iter()
        .zip(z)
        .map(|(a, zi)| a * zi * zi * zi)
        .sum()
}

/// The Eckardt points among the pentahedron vertices: `A_ij` lies on the
/// surface iff `a_i = a_j`, and on a nondegenerate Sylvester surface
/// these are all the Eckardt points. Degenerate forms are rejected — the
/// pentahedron collapses and the numeric line detector must be used.
pub fn eckardt_vertices(s: &SylvesterPoint) -> Result<Vec<PentVertex>> {
    if s.is_degenerate() {
        return Err(Error::DegenerateForm);
    }
    let a = s.coeffs();
    Ok(PentVertex::all()
        .into_iter()
        .filter(|v| a[v.i] == a[v.j])
        .collect())
}

/// Coefficient families, determined by the multiset partition of the
/// (nonzero) coefficient values. The letters follow the classical
/// normal forms: S1 = (a,b,b,c,c), S2 = (a,b,b,b,c), C1 = (a,b,b,b,a),
/// C2 = (a,b,b,b,b), Clebsch = (a,a,a,a,a).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FamilyTag {
    Generic,
    S1,
    S2,
    C1,
    C2,
    Clebsch,
    Degenerate,
}

impl FamilyTag {
    /// Number of Eckardt points on a surface of this family; `None` for
    /// degenerate forms, whose count is not governed by the vertex
    /// criterion.
    pub fn expected_eckardt_count(&self) -> Option<usize> {
        match self {
            FamilyTag::Generic => Some(0),
            FamilyTag::S1 => Some(2),
            FamilyTag::S2 => Some(3),
            FamilyTag::C1 => Some(4),
            FamilyTag::C2 => Some(6),
            FamilyTag::Clebsch => Some(10),
            FamilyTag::Degenerate => None,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            FamilyTag::Generic => "generic",
            FamilyTag::S1 => "S1",
            FamilyTag::S2 => "S2",
            FamilyTag::C1 => "C1",
            FamilyTag::C2 => "C2",
            FamilyTag::Clebsch => "clebsch",
            FamilyTag::Degenerate => "degenerate",
        }
    }
}

/// Indices 0..4 grouped by equal coefficient value, in order of first
/// occurrence.
pub fn value_classes(s: &SylvesterPoint) -> Vec<Vec<usize>> {
    let a = s.coeffs();
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for i in 0..5 {
        match classes.iter_mut().find(|c| a[c[0]] == a[i]) {
            Some(c) => c.push(i),
            None => classes.push(vec![i]),
        }
    }
    classes
}

/// Classifies by the partition shape of the coefficient value multiset;
/// any vanishing coefficient short-circuits to `Degenerate`.
pub fn classify_family(s: &SylvesterPoint) -> FamilyTag {
    if s.is_degenerate() {
        return FamilyTag::Degenerate;
    }
    let mut sizes: Vec<usize> = value_classes(s).iter().map(Vec::len).collect();
    sizes.sort_unstable_by(|x, y| y.cmp(x));
    match sizes.as_slice() {
        [1, 1, 1, 1, 1] => FamilyTag::Generic,
        [2, 2, 1] => FamilyTag::S1,
        [3, 1, 1] => FamilyTag::S2,
        [3, 2] => FamilyTag::C1,
        [4, 1] => FamilyTag::C2,
        [5] => FamilyTag::Clebsch,
        _ => unreachable!("partitions of 5 are exhausted"),
    }
}

/// A subgroup of S5 given by its element list. Permutations act on
/// coefficient vectors by `(p . a)_i = a_{p[i]}`.
#[derive(Debug, Clone)]
pub struct PermSubgroup {
    elements: Vec<[usize; 5]>,
}

pub fn compose(p: &[usize; 5], q: &[usize; 5]) -> [usize; 5] {
    std::array::from_fn(|i| p[q[i]])
}

pub fn identity_perm() -> [usize; 5] {
    [0, 1, 2, 3, 4]
}

fn perm_order(p: &[usize; 5]) -> usize {
    let id = identity_perm();
    let mut acc = *p;
    let mut order = 1;
    while acc != id {
        acc = compose(&acc, p);
        order += 1;
    }
    order
}

impl PermSubgroup {
    /// Builds from an element list, verifying the subgroup axioms.
    pub fn new(mut elements: Vec<[usize; 5]>) -> Self {
        elements.sort_unstable();
        elements.dedup();
        let g = PermSubgroup { elements };
        assert!(g.elements.contains(&identity_perm()), "missing identity");
        for a in &g.elements {
            for b in &g.elements {
                assert!(
                    g.elements.binary_search(&compose(a, b)).is_ok(),
                    "not closed under composition"
                );
            }
        }
        g
    }

    pub fn elements(&self) -> &[[usize; 5]] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn is_abelian(&self) -> bool {
        self.elements
            .iter()
            .all(|a| self.elements.iter().all(|b| compose(a, b) == compose(b, a)))
    }

    /// Map from element order to the number of elements of that order.
    pub fn element_order_histogram(&self) -> BTreeMap<usize, usize> {
        let mut hist = BTreeMap::new();
        for p in &self.elements {
            *hist.entry(perm_order(p)).or_insert(0) += 1;
        }
        hist
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "order": self.order(),
            "abelian": self.is_abelian(),
            "element_orders": self
                .element_order_histogram()
                .iter()
                .map(|(k, v)| (k.to_string(), *v))
                .collect::<BTreeMap<String, usize>>(),
        })
    }
}

/// All 120 permutations of {0..4}.
pub fn all_perms() -> Vec<[usize; 5]> {
    (0..5usize)
        .permutations(5)
        .map(|p| p.try_into().unwrap())
        .collect()
}

/// The stabilizer of the coefficient vector as a projective point: all
/// permutations with `p . a` proportional to `a`. Its order and abelian
/// flag witness the symmetry group of the surface within the pentahedron.
pub fn stabilizer(s: &SylvesterPoint) -> PermSubgroup {
    let elements = all_perms()
        .into_iter()
        .filter(|p| &s.permuted(p) == s)
        .collect();
    PermSubgroup::new(elements)
}

fn check_projective_point(p: &[Rat], expected: usize) -> Result<()> {
    if p.len() != expected {
        return Err(Error::PointLength {
            expected,
            got: p.len(),
        });
    }
    if p.iter().all(Rat::is_zero) {
        return Err(Error::ZeroPoint);
    }
    Ok(())
}

/// Whether two coordinate vectors define the same projective point.
pub fn proportional(p: &[Rat], q: &[Rat]) -> bool {
    if p.len() != q.len() {
        return false;
    }
    let n = p.len();
    for i in 0..n {
        if p[i].is_zero() != q[i].is_zero() {
            return false;
        }
        for j in (i + 1)..n {
            if &p[i] * &q[j] != &p[j] * &q[i] {
                return false;
            }
        }
    }
    true
}

/// Exact rank of a list of coordinate rows via fraction-free-enough
/// Gaussian elimination over the rationals.
#[allow(clippy::needless_range_loop)] // two rows of `rows` are indexed at once
fn rank(mut rows: Vec<Vec<Rat>>) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for col in 0..ncols {
        let Some(pivot) = (r..rows.len()).find(|&k| !rows[k][col].is_zero()) else {
            continue;
        };
        rows.swap(r, pivot);
        for k in (r + 1)..rows.len() {
            if rows[k][col].is_zero() {
                continue;
            }
            let f = &rows[k][col] / &rows[r][col];
            for c in col..ncols {
                let delta = &f * &rows[r][c];
                rows[k][c] -= delta;
            }
        }
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    r
}

/// Whether at least three pairwise distinct projective points lie on a
/// common line: their coordinate matrix must have rank exactly 2.
pub fn collinear(points: &[Vec<Rat>]) -> Result<bool> {
    if points.len() < 3 {
        return Err(Error::TooFewPoints(points.len()));
    }
    let dim = points[0].len();
    for p in points {
        check_projective_point(p, dim)?;
    }
    for i in 0..points.len() {
        for j in (i + 1)..points.len() {
            if proportional(&points[i], &points[j]) {
                return Err(Error::CoincidentPoints);
            }
        }
    }
    Ok(rank(points.to_vec()) == 2)
}

/// Whether the line in P^4 through two distinct points of the hyperplane
/// `sum z = 0` lies on the Sylvester surface: the quintuple of cubics
/// restricted to `s*P + t*Q` must vanish identically. Exact.
pub fn sylvester_contains_line(s: &SylvesterPoint, p: &[Rat], q: &[Rat]) -> Result<bool> {
    check_projective_point(p, 5)?;
    check_projective_point(q, 5)?;
    for pt in [p, q] {
        if !pt.iter().sum::<Rat>().is_zero() {
            return Err(Error::InvalidInput(
                "line endpoints must lie on the hyperplane sum z = 0".into(),
            ));
        }
    }
    if proportional(p, q) {
        return Err(Error::CoincidentPoints);
    }
    // Coefficients of the restricted binary cubic in (s, t):
    // sum a_i (p_i s + q_i t)^3 has coefficients
    // (sum a_i p_i^3, 3 sum a_i p_i^2 q_i, 3 sum a_i p_i q_i^2, sum a_i q_i^3).
    let a = s.coeffs();
    let coeff =
        |f: &dyn Fn(&Rat, &Rat) -> Rat| -> Rat { (0..5).map(|i| &a[i] * f(&p[i], &q[i])).sum() };
    let c0 = coeff(&|pi, _| pi * pi * pi);
    let c1 = coeff(&|pi, qi| pi * pi * qi);
    let c2 = coeff(&|pi, qi| pi * qi * qi);
    let c3 = coeff(&|_, qi| qi * qi * qi);
    Ok(c0.is_zero() && c1.is_zero() && c2.is_zero() && c3.is_zero())
}

/// One verifiable incidence statement about the Eckardt configuration of
/// a surface, together with the computed verdict.
#[derive(Debug, Clone)]
pub enum GeometryFact {
    /// The line joining two Eckardt vertices lies on the surface.
    JoinInSurface {
        from: PentVertex,
        to: PentVertex,
        contained: bool,
    },
    /// Three or more Eckardt vertices lie on a common line.
    VerticesCollinear {
        vertices: Vec<PentVertex>,
        collinear: bool,
    },
    /// The common line of collinear Eckardt vertices lies on the surface.
    CommonLineInSurface {
        through: [PentVertex; 2],
        contained: bool,
    },
    /// All listed Eckardt vertices lie on the pentahedron face `pi_face`.
    VerticesOnFace {
        face: usize,
        vertices: Vec<PentVertex>,
        all_on_face: bool,
    },
}

impl GeometryFact {
    /// Whether the computed verdict matches the classical expectation:
    /// joins lie in the surface, distinguished triples are collinear,
    /// the S2 common line does NOT lie in the surface, and C2 vertices
    /// share a face.
    pub fn as_expected(&self) -> bool {
        match self {
            GeometryFact::JoinInSurface { contained, .. } => *contained,
            GeometryFact::VerticesCollinear { collinear, .. } => *collinear,
            GeometryFact::CommonLineInSurface { contained, .. } => !*contained,
            GeometryFact::VerticesOnFace { all_on_face, .. } => *all_on_face,
        }
    }

    pub fn describe(&self) -> String {
        let pair = |v: &PentVertex| format!("A{}{}", v.indices().0, v.indices().1);
        match self {
            GeometryFact::JoinInSurface {
                from,
                to,
                contained,
            } => format!(
                "join({}, {}) in surface: {}",
                pair(from),
                pair(to),
                contained
            ),
            GeometryFact::VerticesCollinear {
                vertices,
                collinear,
            } => format!(
                "collinear({}): {}",
                vertices.iter().map(pair).join(", "),
                collinear
            ),
            GeometryFact::CommonLineInSurface { through, contained } => format!(
                "common line through {}, {} in surface: {}",
                pair(&through[0]),
                pair(&through[1]),
                contained
            ),
            GeometryFact::VerticesOnFace {
                face,
                vertices,
                all_on_face,
            } => format!(
                "vertices {} on face pi_{}: {}",
                vertices.iter().map(pair).join(", "),
                face,
                all_on_face
            ),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "fact": self.describe(),
            "as_expected": self.as_expected(),
        })
    }
}

/// Family-specific incidence facts about the Eckardt configuration,
/// computed from the actual coefficient equalities (so permuted
/// representatives produce the correspondingly permuted facts):
///
/// - S1: the join of the two Eckardt vertices lies on the surface.
/// - S2: the three Eckardt vertices are collinear; their common line is
///   not on the surface.
/// - C1: the pair-class vertex is joined to each of the three collinear
///   triple-class vertices by lines on the surface.
/// - C2: all six Eckardt vertices lie on the face opposite the singleton
///   coefficient.
///
/// Generic and Clebsch forms produce no facts; degenerate forms are
/// rejected.
pub fn geometry_facts(s: &SylvesterPoint) -> Result<Vec<GeometryFact>> {
    let family = classify_family(s);
    if family == FamilyTag::Degenerate {
        return Err(Error::DegenerateForm);
    }
    let classes = value_classes(s);
    let class_of_size = |n: usize| -> Vec<Vec<usize>> {
        classes.iter().filter(|c| c.len() == n).cloned().collect()
    };
    let vertices_of_class = |c: &[usize]| -> Vec<PentVertex> {
        c.iter()
            .tuple_combinations()
            .map(|(&i, &j)| PentVertex::new(i, j))
            .collect()
    };
    let join_fact = |a: PentVertex, b: PentVertex| -> Result<GeometryFact> {
        let contained = sylvester_contains_line(s, &a.p4_coords(), &b.p4_coords())?;
        Ok(GeometryFact::JoinInSurface {
            from: a,
            to: b,
            contained,
        })
    };

    let mut facts = Vec::new();
    match family {
        FamilyTag::S1 => {
            let pairs = class_of_size(2);
            let a = vertices_of_class(&pairs[0])[0];
            let b = vertices_of_class(&pairs[1])[0];
            facts.push(join_fact(a, b)?);
        }
        FamilyTag::S2 => {
            let triple = vertices_of_class(&class_of_size(3)[0]);
            let coords: Vec<Vec<Rat>> = triple.iter().map(|v| v.p4_coords().to_vec()).collect();
            facts.push(GeometryFact::VerticesCollinear {
                vertices: triple.clone(),
                collinear: collinear(&coords)?,
            });
            let contained =
                sylvester_contains_line(s, &triple[0].p4_coords(), &triple[1].p4_coords())?;
            facts.push(GeometryFact::CommonLineInSurface {
                through: [triple[0], triple[1]],
                contained,
            });
        }
        FamilyTag::C1 => {
            let triple = vertices_of_class(&class_of_size(3)[0]);
            let apex = vertices_of_class(&class_of_size(2)[0])[0];
            let coords: Vec<Vec<Rat>> = triple.iter().map(|v| v.p4_coords().to_vec()).collect();
            facts.push(GeometryFact::VerticesCollinear {
                vertices: triple.clone(),
                collinear: collinear(&coords)?,
            });
            for v in triple {
                facts.push(join_fact(apex, v)?);
            }
        }
        FamilyTag::C2 => {
            let face = class_of_size(1)[0][0];
            let vertices = vertices_of_class(&class_of_size(4)[0]);
            let all_on_face = vertices.iter().all(|v| v.p4_coords()[face].is_zero());
            facts.push(GeometryFact::VerticesOnFace {
                face,
                vertices,
                all_on_face,
            });
        }
        FamilyTag::Generic | FamilyTag::Clebsch => {}
        FamilyTag::Degenerate => unreachable!(),
    }
    Ok(facts)
}

#[cfg(test)]
mod tests {
    use crate::arith::rat_from_i64;

    use super::*;

    fn pt(c: [i64; 5]) -> SylvesterPoint {
        SylvesterPoint::from_ints(c)
    }

    fn vertex_set(s: &SylvesterPoint) -> Vec<(usize, usize)> {
        eckardt_vertices(s)
            .unwrap()
            .iter()
            .map(|v| v.indices())
            .collect()
    }

    #[test]
    fn fermat_arises_from_a_degenerate_form() {
        let f = to_cubic_p3(&pt([1, 1, 1, 1, 0]));
        let mut expected = MultiPoly::zero(4);
        for i in 0..4 {
            expected = expected.add(&MultiPoly::var(4, i).pow(3));
        }
        assert_eq!(f.poly(), &expected);
    }

    #[test]
    fn pure_last_coefficient_gives_the_negated_plane_cube() {
        let f = to_cubic_p3(&pt([0, 0, 0, 0, 1]));
        assert_eq!(f.poly().num_terms(), 20);
        // Coefficient of x0^2 x1 is -binomial(3; 2,1,0,0) = -3.
        let coeffs = f.coefficients();
        let pos = CubicForm3::monomial_order()
            .iter()
            .position(|e| *e == [2, 1, 0, 0])
            .unwrap();
        assert_eq!(coeffs[pos], rat_from_i64(-3));
        assert_eq!(coeffs[0], rat_from_i64(-1)); // x0^3
    }

    #[test]
    fn coefficient_order_starts_and_ends_with_pure_cubes() {
        let order = CubicForm3::monomial_order();
        assert_eq!(order[0], [3, 0, 0, 0]);
        assert_eq!(order[19], [0, 0, 0, 3]);
        assert_eq!(order.len(), 20);
    }

    #[test]
    fn eckardt_vertices_follow_coefficient_equalities() {
        assert_eq!(vertex_set(&pt([1, 2, 2, 3, 3])), vec![(1, 2), (3, 4)]);
        assert_eq!(
            vertex_set(&pt([1, 2, 3, 4, 5])),
            Vec::<(usize, usize)>::new()
        );
        assert_eq!(eckardt_vertices(&pt([1, 1, 1, 1, 1])).unwrap().len(), 10);
        assert!(matches!(
            eckardt_vertices(&pt([1, 1, 2, 3, 0])),
            Err(Error::DegenerateForm)
        ));
    }

    #[test]
    fn vertex_is_eckardt_iff_form_vanishes_there() {
        // The form restricts to (a_i - a_j) t^3 at A_ij.
        for c in [[1, 2, 2, 3, 3], [1, 2, 3, 4, 5], [2, 2, 2, 5, 7]] {
            let s = pt(c);
            let eck = vertex_set(&s);
            for v in PentVertex::all() {
                let on_surface = sylvester_eval(&s, &v.p4_coords()).is_zero();
                assert_eq!(on_surface, eck.contains(&v.indices()), "{c:?} {v:?}");
            }
        }
    }

    #[test]
    fn family_classification_by_value_partition() {
        assert_eq!(classify_family(&pt([7, 3, 3, 5, 5])), FamilyTag::S1);
        assert_eq!(classify_family(&pt([2, 9, 9, 9, 2])), FamilyTag::C1);
        assert_eq!(classify_family(&pt([1, 1, 1, 1, 1])), FamilyTag::Clebsch);
        assert_eq!(classify_family(&pt([1, 2, 2, 2, 3])), FamilyTag::S2);
        assert_eq!(classify_family(&pt([1, 2, 2, 2, 2])), FamilyTag::C2);
        assert_eq!(classify_family(&pt([1, 2, 3, 4, 5])), FamilyTag::Generic);
        assert_eq!(classify_family(&pt([0, 1, 2, 3, 4])), FamilyTag::Degenerate);
    }

    #[test]
    fn eckardt_counts_match_families() {
        for (c, n) in [
            ([1, 2, 3, 4, 5], 0),
            ([1, 2, 2, 3, 3], 2),
            ([1, 2, 2, 2, 3], 3),
            ([1, 2, 2, 2, 1], 4),
            ([1, 2, 2, 2, 2], 6),
            ([1, 1, 1, 1, 1], 10),
        ] {
            let s = pt(c);
            assert_eq!(eckardt_vertices(&s).unwrap().len(), n, "{c:?}");
            assert_eq!(
                classify_family(&s).expected_eckardt_count(),
                Some(n),
                "{c:?}"
            );
        }
    }

    #[test]
    fn stabilizer_orders_and_structure() {
        let g = stabilizer(&pt([1, 2, 2, 3, 3]));
        assert_eq!(g.order(), 4);
        assert!(g.is_abelian());
        // Klein four group: three involutions.
        assert_eq!(
            g.element_order_histogram(),
            BTreeMap::from([(1, 1), (2, 3)])
        );

        let cases = [
            ([1, 2, 2, 2, 3], 6, false),
            ([1, 2, 2, 2, 1], 12, false),
            ([1, 2, 2, 2, 2], 24, false),
            ([1, 1, 1, 1, 1], 120, false),
            ([1, 2, 3, 4, 5], 1, true),
        ];
        for (c, order, abelian) in cases {
            let g = stabilizer(&pt(c));
            assert_eq!(g.order(), order, "{c:?}");
            assert_eq!(g.is_abelian(), abelian, "{c:?}");
        }
    }

    #[test]
    fn stabilizer_sees_projective_scalings() {
        // (1,-1,2,-2,0) admits the double swap (0 1)(2 3) only through the
        // scaling lambda = -1, which the projective comparison allows.
        let s = pt([1, -1, 2, -2, 0]);
        let g = stabilizer(&s);
        assert!(g.elements().contains(&[1, 0, 3, 2, 4]));
    }

    #[test]
    fn line_containment_facts_for_the_three_normal_forms() {
        // S1: the join of the two Eckardt vertices lies on the surface.
        let s1 = pt([1, 2, 2, 3, 3]);
        let a12 = PentVertex::new(1, 2).p4_coords();
        let a34 = PentVertex::new(3, 4).p4_coords();
        assert!(sylvester_contains_line(&s1, &a12, &a34).unwrap());

        // S2: the common line of the three collinear vertices is NOT on it.
        let s2 = pt([1, 2, 2, 2, 3]);
        let a13 = PentVertex::new(1, 3).p4_coords();
        assert!(!sylvester_contains_line(&s2, &a12, &a13).unwrap());

        // C1: the join from the pair-class vertex to a triple-class vertex
        // cancels exactly: a s^3 + b t^3 - b t^3 - a s^3.
        let c1 = pt([1, 2, 2, 2, 1]);
        let a04 = PentVertex::new(0, 4).p4_coords();
        assert!(sylvester_contains_line(&c1, &a04, &a12).unwrap());
    }

    #[test]
    fn p3_containment_agrees_with_the_p4_check() {
        let s1 = pt([1, 2, 2, 3, 3]);
        let f = to_cubic_p3(&s1);
        let a12 = PentVertex::new(1, 2);
        let a34 = PentVertex::new(3, 4);
        assert!(f.contains_line(&a12.p3_coords(), &a34.p3_coords()).unwrap());
        let a13 = PentVertex::new(1, 3);
        assert!(!f.contains_line(&a12.p3_coords(), &a13.p3_coords()).unwrap());
    }

    #[test]
    fn containment_rejects_coincident_points() {
        let s = pt([1, 2, 2, 3, 3]);
        let a12 = PentVertex::new(1, 2).p4_coords();
        let doubled: Vec<Rat> = a12.iter().map(|x| x * rat_from_i64(2)).collect();
        assert!(matches!(
            sylvester_contains_line(&s, &a12, &doubled),
            Err(Error::CoincidentPoints)
        ));
        let f = to_cubic_p3(&s);
        let p = PentVertex::new(1, 2).p3_coords();
        assert!(matches!(
            f.contains_line(&p, &p),
            Err(Error::CoincidentPoints)
        ));
    }

    #[test]
    fn containment_requires_points_on_the_hyperplane() {
        let s = pt([1, 2, 2, 3, 3]);
        let off = [1, 0, 0, 0, 0].map(rat_from_i64);
        let a12 = PentVertex::new(1, 2).p4_coords();
        assert!(matches!(
            sylvester_contains_line(&s, &off, &a12),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn collinearity_of_shared_index_vertices() {
        let triple: Vec<Vec<Rat>> = [(1, 2), (1, 3), (2, 3)]
            .iter()
            .map(|&(i, j)| PentVertex::new(i, j).p4_coords().to_vec())
            .collect();
        assert!(collinear(&triple).unwrap());

        let spread: Vec<Vec<Rat>> = [(1, 2), (3, 4), (0, 1)]
            .iter()
            .map(|&(i, j)| PentVertex::new(i, j).p4_coords().to_vec())
            .collect();
        assert!(!collinear(&spread).unwrap());
    }

    #[test]
    fn collinearity_input_validation() {
        let p = PentVertex::new(0, 1).p4_coords().to_vec();
        let q = PentVertex::new(2, 3).p4_coords().to_vec();
        assert!(matches!(
            collinear(&[p.clone(), q.clone()]),
            Err(Error::TooFewPoints(2))
        ));
        assert!(matches!(
            collinear(&[p.clone(), p.clone(), q]),
            Err(Error::CoincidentPoints)
        ));
    }

    #[test]
    fn geometry_facts_hold_on_all_families() {
        for c in [
            [1, 2, 2, 3, 3],
            [1, 2, 2, 2, 3],
            [1, 2, 2, 2, 1],
            [1, 2, 2, 2, 2],
            [1, 2, 3, 4, 5],
            [1, 1, 1, 1, 1],
        ] {
            let facts = geometry_facts(&pt(c)).unwrap();
            for fact in &facts {
                assert!(fact.as_expected(), "{c:?}: {}", fact.describe());
            }
        }
    }

    #[test]
    fn geometry_facts_shapes_per_family() {
        let s1 = geometry_facts(&pt([1, 2, 2, 3, 3])).unwrap();
        assert_eq!(s1.len(), 1);
        assert!(matches!(s1[0], GeometryFact::JoinInSurface { .. }));

        let s2 = geometry_facts(&pt([1, 2, 2, 2, 3])).unwrap();
        assert_eq!(s2.len(), 2);
        assert!(matches!(s2[0], GeometryFact::VerticesCollinear { .. }));
        assert!(matches!(s2[1], GeometryFact::CommonLineInSurface { .. }));

        let c1 = geometry_facts(&pt([1, 2, 2, 2, 1])).unwrap();
        assert_eq!(c1.len(), 4);

        let c2 = geometry_facts(&pt([1, 2, 2, 2, 2])).unwrap();
        assert_eq!(c2.len(), 1);
        match &c2[0] {
            GeometryFact::VerticesOnFace { face, vertices, .. } => {
                assert_eq!(*face, 0);
                assert_eq!(vertices.len(), 6);
            }
            other => panic!("unexpected fact {other:?}"),
        }

        assert!(geometry_facts(&pt([1, 2, 3, 4, 5])).unwrap().is_empty());
        assert!(matches!(
            geometry_facts(&pt([0, 1, 2, 3, 4])),
            Err(Error::DegenerateForm)
        ));
    }

    #[test]
    fn geometry_facts_follow_permuted_coefficients() {
        // C2 with the singleton in slot 3: the shared face must be pi_3.
        let facts = geometry_facts(&pt([2, 2, 2, 1, 2])).unwrap();
        match &facts[0] {
            GeometryFact::VerticesOnFace {
                face, all_on_face, ..
            } => {
                assert_eq!(*face, 3);
                assert!(all_on_face);
            }
            other => panic!("unexpected fact {other:?}"),
        }
    }

    #[test]
    fn eckardt_vertices_are_equivariant() {
        let s = pt([1, 2, 2, 3, 3]);
        for perm in all_perms() {
            let permuted = s.permuted(&perm);
            let direct = vertex_set(&permuted);
            let mut mapped: Vec<(usize, usize)> = vertex_set(&s)
                .iter()
                .map(|&(i, j)| {
                    // A_{ij} of s corresponds to A at the preimage slots.
                    let pi = perm.iter().position(|&k| k == i).unwrap();
                    let pj = perm.iter().position(|&k| k == j).unwrap();
                    PentVertex::new(pi, pj).indices()
                })
                .collect();
            mapped.sort_unstable();
            assert_eq!(direct, mapped, "perm {perm:?}");
        }
    }

    #[test]
    fn subgroup_constructor_rejects_non_closed_sets() {
        let r =
            std::panic::catch_unwind(|| PermSubgroup::new(vec![identity_perm(), [1, 2, 0, 3, 4]]));
        assert!(r.is_err(), "a lone 3-cycle with identity is not closed");
    }
}
