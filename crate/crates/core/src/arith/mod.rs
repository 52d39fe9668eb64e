//! Exact arbitrary-precision rational arithmetic and sparse multivariate
//! polynomials, including factored representations that never expand.

mod factored;
mod poly;
mod rat;

pub use factored::{FactoredPoly, FactoredSum};
pub use poly::{Monomial, MultiPoly};
pub use rat::{parse_rat, rat_from_i64, rat_to_f64, rat_to_string, Rat};

use crate::{Error, Result};

/// The elementary symmetric polynomial of degree `k` in the five ambient
/// variables `a0..a4`. Has `C(5,k)` terms, all with coefficient 1.
pub fn elem_sym(k: usize) -> Result<MultiPoly> {
    if !(1..=5).contains(&k) {
        return Err(Error::ElemSymIndex(k));
    }
    let mut p = MultiPoly::zero(5);
    for subset in itertools::Itertools::combinations(0..5usize, k) {
        let mut exps = vec![0u32; 5];
        for i in subset {
            exps[i] = 1;
        }
        p.add_term(Monomial::new(exps), Rat::from_integer(1.into()));
    }
    Ok(p)
}
