//! Factored polynomials: a scalar times a product of sparse polynomial
//! bases with positive exponents. Keeps huge products (the degree-100
//! invariant and its partials) evaluable without ever expanding them.

use num::Zero;

use super::poly::MultiPoly;
use super::rat::Rat;

/// `scalar * prod(base_i ^ exp_i)` with non-constant, pairwise distinct
/// bases. The zero polynomial is `scalar == 0` with no factors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactoredPoly {
    scalar: Rat,
    factors: Vec<(MultiPoly, u32)>,
}

impl FactoredPoly {
    /// Normalizing constructor: folds constant bases into the scalar,
    /// drops zero exponents, merges duplicate bases, and collapses the
    /// whole product to zero when any base is the zero polynomial.
    pub fn new(scalar: Rat, factors: Vec<(MultiPoly, u32)>) -> Self {
        let nvars = factors.first().map_or(0, |(b, _)| b.nvars());
        let mut scalar = scalar;
        let mut kept: Vec<(MultiPoly, u32)> = Vec::new();
        for (base, exp) in factors {
            assert_eq!(base.nvars(), nvars, "mixed variable counts in factors");
            if exp == 0 || scalar.is_zero() {
                continue;
            }
            match base.as_constant() {
                Some(c) if c.is_zero() => {
                    scalar = Rat::zero();
                    kept.clear();
                }
                Some(c) => {
                    for _ in 0..exp {
                        scalar *= &c;
                    }
                }
                None => kept.push((base, exp)),
            }
        }
        if scalar.is_zero() {
            kept.clear();
        }
        kept.sort_by(|(a, _), (b, _)| a.cmp(b));
        let mut merged: Vec<(MultiPoly, u32)> = Vec::new();
        for (base, exp) in kept {
            match merged.last_mut() {
                Some((prev, e)) if *prev == base => *e += exp,
                _ => merged.push((base, exp)),
            }
        }
        FactoredPoly {
            scalar,
            factors: merged,
        }
    }

    pub fn constant(c: Rat) -> Self {
        FactoredPoly {
            scalar: c,
            factors: Vec::new(),
        }
    }

    pub fn scalar(&self) -> &Rat {
        &self.scalar
    }

    pub fn factors(&self) -> &[(MultiPoly, u32)] {
        &self.factors
    }

    pub fn nvars(&self) -> usize {
        self.factors.first().map_or(0, |(b, _)| b.nvars())
    }

    /// True exactly when the product is the zero polynomial. Sound because
    /// the constructor collapses vanishing bases into a zero scalar.
    pub fn is_zero(&self) -> bool {
        self.scalar.is_zero()
    }

    pub fn total_degree(&self) -> u32 {
        self.factors.iter().map(|(b, e)| b.total_degree() * e).sum()
    }

    /// Exact factor-wise evaluation; the product is never expanded.
    pub fn eval(&self, point: &[Rat]) -> Rat {
        let mut acc = self.scalar.clone();
        for (base, exp) in &self.factors {
            if acc.is_zero() {
                return acc;
            }
            let v = base.eval(point);
            if v.is_zero() {
                return Rat::zero();
            }
            for _ in 0..*exp {
                acc *= &v;
            }
        }
        acc
    }

    /// Exact composition, applied base-by-base and renormalized.
    pub fn substitute(&self, map: &[MultiPoly]) -> FactoredPoly {
        let factors = self
            .factors
            .iter()
            .map(|(b, e)| (b.substitute(map), *e))
            .collect();
        FactoredPoly::new(self.scalar.clone(), factors)
    }

    /// Expands into a plain sparse polynomial. Only sensible for small
    /// total degrees; verification paths avoid it.
    pub fn expand(&self, nvars: usize) -> MultiPoly {
        let mut out = MultiPoly::constant(nvars, self.scalar.clone());
        for (base, exp) in &self.factors {
            out = out.mul(&base.pow(*exp));
        }
        out
    }

    /// Formal partial derivative by the product rule. Each summand lowers
    /// one factor's exponent by one and multiplies in that base's
    /// derivative; factors free of the variable contribute nothing.
    pub fn derive(&self, var: usize) -> FactoredSum {
        let mut summands = Vec::new();
        for (t, (base, exp)) in self.factors.iter().enumerate() {
            let dbase = base.derive(var);
            if dbase.is_zero() {
                continue;
            }
            let mut factors: Vec<(MultiPoly, u32)> = Vec::with_capacity(self.factors.len() + 1);
            for (s, (b, e)) in self.factors.iter().enumerate() {
                let e = if s == t { e - 1 } else { *e };
                if e > 0 {
                    factors.push((b.clone(), e));
                }
            }
            factors.push((dbase, 1));
            let scalar = &self.scalar * Rat::from_integer((*exp).into());
            summands.push(FactoredPoly::new(scalar, factors));
        }
        FactoredSum::new(summands)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "scalar": super::rat::rat_to_string(&self.scalar),
            "factors": self.factors.iter().map(|(b, e)| {
                serde_json::json!({"base": b.to_json(), "exponent": e})
            }).collect::<Vec<_>>(),
        })
    }
}

/// A formal sum of factored polynomials; evaluation distributes over the
/// summands. Produced by differentiating a [`FactoredPoly`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactoredSum {
    summands: Vec<FactoredPoly>,
}

impl FactoredSum {
    pub fn new(summands: Vec<FactoredPoly>) -> Self {
        FactoredSum {
            summands: summands.into_iter().filter(|s| !s.is_zero()).collect(),
        }
    }

    pub fn summands(&self) -> &[FactoredPoly] {
        &self.summands
    }

    pub fn eval(&self, point: &[Rat]) -> Rat {
        self.summands.iter().map(|s| s.eval(point)).sum()
    }

    pub fn substitute(&self, map: &[MultiPoly]) -> FactoredSum {
        FactoredSum::new(self.summands.iter().map(|s| s.substitute(map)).collect())
    }

    pub fn expand(&self, nvars: usize) -> MultiPoly {
        let mut out = MultiPoly::zero(nvars);
        for s in &self.summands {
            out = out.add(&s.expand(nvars));
        }
        out
    }

    /// Exact zero test. The cheap certificate (every summand is a product
    /// with a vanishing factor) is checked first; only when summands could
    /// cancel against each other does this expand and add them.
    pub fn is_identically_zero(&self, nvars: usize) -> bool {
        if self.summands.iter().all(FactoredPoly::is_zero) {
            return true;
        }
        self.expand(nvars).is_zero()
    }
}
