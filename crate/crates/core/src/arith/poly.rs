//! Sparse multivariate polynomials with exact rational coefficients.

use std::collections::BTreeMap;
use std::fmt;

use num::{One, Signed, Zero};

use super::rat::{rat_to_string, Rat};

/// Exponent vector of a single monomial. Ordered graded-lexicographically:
/// first by total degree, then lexicographically on the exponents.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Self {
        Monomial(exps)
    }

    pub fn constant(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.0.len(), other.0.len());
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse multivariate polynomial over the rationals.
///
/// Terms map exponent vectors to nonzero coefficients; zero coefficients
/// are never stored, so equality is term-map equality. The term map is
/// ordered, which makes iteration (and hence printing and serialization)
/// canonical.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct MultiPoly {
    nvars: usize,
    terms: BTreeMap<Monomial, Rat>,
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> Self {
        MultiPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Rat) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(Monomial::constant(nvars), c);
        p
    }

    /// The polynomial `x_i`.
    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(
            i < nvars,
            "variable index {i} out of range for {nvars} vars"
        );
        let mut exps = vec![0; nvars];
        exps[i] = 1;
        let mut p = Self::zero(nvars);
        p.add_term(Monomial::new(exps), Rat::one());
        p
    }

    /// The linear form `x_i - x_j`.
    pub fn var_diff(nvars: usize, i: usize, j: usize) -> Self {
        Self::var(nvars, i).sub(&Self::var(nvars, j))
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `Some(c)` when the polynomial is a constant (including zero).
    pub fn as_constant(&self) -> Option<Rat> {
        match self.terms.len() {
            0 => Some(Rat::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                (m.total_degree() == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(Monomial::total_degree)
            .max()
            .unwrap_or(0)
    }

    /// Smallest exponent of variable `v` over all terms (the `v`-adic
    /// valuation); `None` for the zero polynomial.
    pub fn valuation(&self, v: usize) -> Option<u32> {
        assert!(v < self.nvars);
        self.terms.keys().map(|m| m.exponents()[v]).min()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rat)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, m: Monomial, c: Rat) {
        debug_assert_eq!(m.exponents().len(), self.nvars);
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &MultiPoly) -> MultiPoly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> MultiPoly {
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, c: &Rat) -> MultiPoly {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    pub fn mul(&self, other: &MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, other.nvars);
        let mut out = Self::zero(self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> MultiPoly {
        let mut out = Self::constant(self.nvars, Rat::one());
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                out = out.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        out
    }

    /// Formal partial derivative with respect to variable `v`.
    pub fn derive(&self, v: usize) -> MultiPoly {
        assert!(v < self.nvars);
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.exponents()[v];
            if e == 0 {
                continue;
            }
            let mut exps = m.exponents().to_vec();
            exps[v] -= 1;
            out.add_term(Monomial::new(exps), c * Rat::from_integer(e.into()));
        }
        out
    }

    /// Exact composition: replaces variable `i` by `map[i]`. The map must
    /// be total, and all images must share a common variable count.
    pub fn substitute(&self, map: &[MultiPoly]) -> MultiPoly {
        assert_eq!(map.len(), self.nvars, "substitution map must be total");
        let target_nvars = map.first().map_or(0, MultiPoly::nvars);
        assert!(map.iter().all(|p| p.nvars() == target_nvars));

        // Cache powers of each image as they are needed.
        let mut powers: Vec<Vec<MultiPoly>> = map
            .iter()
            .map(|p| vec![MultiPoly::constant(target_nvars, Rat::one()), p.clone()])
            .collect();
        let power = |v: usize, e: u32, powers: &mut Vec<Vec<MultiPoly>>| -> MultiPoly {
            while powers[v].len() <= e as usize {
                let last = powers[v].last().unwrap().clone();
                powers[v].push(last.mul(&map[v]));
            }
            powers[v][e as usize].clone()
        };

        let mut out = MultiPoly::zero(target_nvars);
        for (m, c) in &self.terms {
            let mut term = MultiPoly::constant(target_nvars, c.clone());
            for (v, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    term = term.mul(&power(v, e, &mut powers));
                }
            }
            out = out.add(&term);
        }
        out
    }

    /// Exact evaluation at a rational point.
    pub fn eval(&self, point: &[Rat]) -> Rat {
        assert_eq!(point.len(), self.nvars, "point length mismatch");
        let mut powers: Vec<Vec<Rat>> = point.iter().map(|x| vec![Rat::one(), x.clone()]).collect();
        let power = |v: usize, e: u32, powers: &mut Vec<Vec<Rat>>| -> Rat {
            while powers[v].len() <= e as usize {
                let last = powers[v].last().unwrap().clone();
                powers[v].push(last * &point[v]);
            }
            powers[v][e as usize].clone()
        };
        let mut acc = Rat::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    t *= power(v, e, &mut powers);
                }
            }
            acc += t;
        }
        acc
    }

    /// Serializes as a JSON list of `{exponents, coeff}` objects in the
    /// canonical order (descending graded-lex, leading term first).
    pub fn to_json(&self) -> serde_json::Value {
        let terms: Vec<_> = self
            .terms
            .iter()
            .rev()
            .map(|(m, c)| {
                serde_json::json!({
                    "exponents": m.exponents(),
                    "coeff": rat_to_string(c),
                })
            })
            .collect();
        serde_json::Value::Array(terms)
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let names = ["a0", "a1", "a2", "a3", "a4", "a5", "a6", "a7"];
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = if neg { -c } else { c.clone() };
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            let is_const_term = m.total_degree() == 0;
            if !abs.is_one() || is_const_term {
                write!(f, "{}", abs)?;
                if !is_const_term {
                    write!(f, "*")?;
                }
            }
            let mut first = true;
            for (v, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if !first {
                    write!(f, "*")?;
                }
                first = false;
                let name = names.get(v).copied().unwrap_or("x");
                if e == 1 {
                    write!(f, "{name}")?;
                } else {
                    write!(f, "{name}^{e}")?;
                }
            }
        }
        Ok(())
    }
}
