//! Ground-field elements: arbitrary-precision rationals.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::ToPrimitive;

use crate::{Error, Result};

/// Exact rational number, always in lowest terms with positive denominator.
pub type Rat = BigRational;

/// Shorthand for building a rational from a machine integer.
pub fn rat_from_i64(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Parses the serialized form `"p/q"` (or `"p"` when the denominator is 1).
pub fn parse_rat(s: &str) -> Result<Rat> {
    s.trim()
        .parse::<Rat>()
        .map_err(|e| Error::InvalidInput(format!("bad rational {s:?}: {e}")))
}

/// Serializes as `"p/q"`, or `"p"` when the denominator is 1.
pub fn rat_to_string(r: &Rat) -> String {
    r.to_string()
}

/// Nearest double; loses precision for huge values, used only by
/// floating-point cross-checks.
pub fn rat_to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print_round_trip() {
        for s in ["3", "-7/2", "0", "22/7"] {
            let r = parse_rat(s).unwrap();
            assert_eq!(rat_to_string(&r), s);
        }
    }

    #[test]
    fn parse_normalizes_to_lowest_terms() {
        let r = parse_rat("6/4").unwrap();
        assert_eq!(rat_to_string(&r), "3/2");
        let r = parse_rat("5/-10").unwrap();
        assert_eq!(rat_to_string(&r), "-1/2");
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(parse_rat("a/b").is_err());
        assert!(parse_rat("").is_err());
    }
}
