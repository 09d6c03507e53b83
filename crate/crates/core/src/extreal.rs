//! Extended reals: finite values plus the two infinities.
//!
//! Derivative estimates live in `[-inf, +inf]`, while function values are
//! restricted to finite numbers and `+inf`. NaN is never representable.

use std::cmp::Ordering;
use std::fmt;

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A value of `R ∪ {-inf, +inf}` with a total order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtReal {
    NegInf,
    Finite(f64),
    PosInf,
}

impl ExtReal {
    pub const ZERO: ExtReal = ExtReal::Finite(0.0);

    /// Maps an `f64` onto the extended line; infinities keep their sign.
    pub fn from_f64(x: f64) -> Result<Self> {
        if x.is_nan() {
            Err(Error::NaN)
        } else if x == f64::INFINITY {
            Ok(ExtReal::PosInf)
        } else if x == f64::NEG_INFINITY {
            Ok(ExtReal::NegInf)
        } else {
            Ok(ExtReal::Finite(x))
        }
    }

    /// Constructor for values of a proper function: `-inf` is rejected.
    pub fn function_value(x: f64) -> Result<Self> {
        match Self::from_f64(x)? {
            ExtReal::NegInf => Err(Error::NegInfFunctionValue),
            v => Ok(v),
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, ExtReal::Finite(_))
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            ExtReal::Finite(v) => Some(v),
            _ => None,
        }
    }

    /// `f64` view; infinities map to the IEEE infinities.
    pub fn to_f64(self) -> f64 {
        match self {
            ExtReal::NegInf => f64::NEG_INFINITY,
            ExtReal::Finite(v) => v,
            ExtReal::PosInf => f64::INFINITY,
        }
    }

    pub fn abs(self) -> ExtReal {
        match self {
            ExtReal::Finite(v) => ExtReal::Finite(v.abs()),
            _ => ExtReal::PosInf,
        }
    }

    pub fn neg(self) -> ExtReal {
        match self {
            ExtReal::NegInf => ExtReal::PosInf,
            ExtReal::Finite(v) => ExtReal::Finite(-v),
            ExtReal::PosInf => ExtReal::NegInf,
        }
    }

    /// Sum of two extended reals. `+inf + -inf` is an error.
    pub fn add(self, other: ExtReal) -> Result<ExtReal> {
        use ExtReal::*;
        match (self, other) {
            (PosInf, NegInf) | (NegInf, PosInf) => Err(Error::InfMinusInf),
            (PosInf, _) | (_, PosInf) => Ok(PosInf),
            (NegInf, _) | (_, NegInf) => Ok(NegInf),
            (Finite(a), Finite(b)) => ExtReal::from_f64(a + b),
        }
    }

    fn rank(self) -> u8 {
        match self {
            ExtReal::NegInf => 0,
            ExtReal::Finite(_) => 1,
            ExtReal::PosInf => 2,
        }
    }
}

impl Eq for ExtReal {}

impl Ord for ExtReal {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            // NaN is unrepresentable, so partial_cmp is total here
            (ExtReal::Finite(a), ExtReal::Finite(b)) => a.partial_cmp(b).unwrap_or(Ordering::Equal),
            _ => self.rank().cmp(&other.rank()),
        }
    }
}

impl PartialOrd for ExtReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<f64> for ExtReal {
    /// Panics on NaN; use [`ExtReal::from_f64`] for untrusted input.
    fn from(x: f64) -> Self {
        ExtReal::from_f64(x).expect("NaN is not an extended real")
    }
}

impl fmt::Display for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtReal::NegInf => f.write_str("-inf"),
            ExtReal::PosInf => f.write_str("+inf"),
            ExtReal::Finite(v) => write!(f, "{v}"),
        }
    }
}

/// Least element of a non-empty sample set.
pub fn ext_min<I>(values: I) -> Result<ExtReal>
where
    I: IntoIterator<Item = ExtReal>,
{
    values.into_iter().min().ok_or(Error::EmptySampleSet)
}

/// `c·a + b` for finite `c` and `b`, propagating infinities by the sign of `c`.
pub fn ext_affine_combine(a: ExtReal, c: f64, b: f64) -> Result<ExtReal> {
    if !c.is_finite() || !b.is_finite() {
        return Err(if c.is_nan() || b.is_nan() { Error::NaN } else { Error::NonFiniteCoefficient });
    }
    match a {
        ExtReal::Finite(v) => ExtReal::from_f64(c * v + b),
        _ if c == 0.0 => Err(Error::ZeroTimesInf),
        inf if c > 0.0 => Ok(inf),
        inf => Ok(inf.neg()),
    }
}

impl Serialize for ExtReal {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ExtReal::Finite(v) => serializer.serialize_f64(*v),
            ExtReal::PosInf => serializer.serialize_str("+inf"),
            ExtReal::NegInf => serializer.serialize_str("-inf"),
        }
    }
}

struct ExtRealVisitor;

impl<'de> Visitor<'de> for ExtRealVisitor {
    type Value = ExtReal;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("a number or one of \"+inf\", \"-inf\"")
    }

    fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<ExtReal, E> {
        ExtReal::from_f64(v).map_err(E::custom)
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<ExtReal, E> {
        Ok(ExtReal::Finite(v as f64))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<ExtReal, E> {
        Ok(ExtReal::Finite(v as f64))
    }

    fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<ExtReal, E> {
        match v {
            "+inf" | "inf" => Ok(ExtReal::PosInf),
            "-inf" => Ok(ExtReal::NegInf),
            other => Err(E::invalid_value(de::Unexpected::Str(other), &self)),
        }
    }
}

impl<'de> Deserialize<'de> for ExtReal {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        deserializer.deserialize_any(ExtRealVisitor)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use ExtReal::*;

    #[test]
    fn min_examples() {
        assert_eq!(ext_min([Finite(3.0), PosInf, Finite(-1.5)]).unwrap(), Finite(-1.5));
        assert_eq!(ext_min([PosInf, PosInf]).unwrap(), PosInf);
        assert_eq!(ext_min([Finite(0.0)]).unwrap(), Finite(0.0));
        assert!(matches!(ext_min(Vec::new()), Err(Error::EmptySampleSet)));
    }

    #[test]
    fn affine_examples() {
        assert_eq!(ext_affine_combine(Finite(2.0), 3.0, -1.0).unwrap(), Finite(5.0));
        assert_eq!(ext_affine_combine(PosInf, 2.0, -7.0).unwrap(), PosInf);
        assert_eq!(ext_affine_combine(PosInf, -2.0, 0.0).unwrap(), NegInf);
        assert!(matches!(ext_affine_combine(PosInf, 0.0, 1.0), Err(Error::ZeroTimesInf)));
    }

    #[test]
    fn ordering_and_rejections() {
        assert!(NegInf < Finite(-1e300));
        assert!(Finite(1e300) < PosInf);
        assert_eq!(Finite(-0.0).cmp(&Finite(0.0)), Ordering::Equal);
        assert!(matches!(PosInf.add(NegInf), Err(Error::InfMinusInf)));
        assert!(ExtReal::from_f64(f64::NAN).is_err());
        assert!(ExtReal::function_value(f64::NEG_INFINITY).is_err());
        assert_eq!(ExtReal::function_value(f64::INFINITY).unwrap(), PosInf);
    }

    #[test]
    fn json_encoding() {
        let v = vec![Finite(1.5), PosInf, NegInf];
        let s = serde_json::to_string(&v).unwrap();
        assert_eq!(s, r#"[1.5,"+inf","-inf"]"#);
        let back: Vec<ExtReal> = serde_json::from_str(&s).unwrap();
        assert_eq!(back, v);
        let int: ExtReal = serde_json::from_str("3").unwrap();
        assert_eq!(int, Finite(3.0));
    }

    fn ext() -> impl Strategy<Value = ExtReal> {
        prop_oneof![
            1 => Just(PosInf),
            1 => Just(NegInf),
            6 => (-1e6f64..1e6).prop_map(Finite),
        ]
    }

    proptest! {
        #[test]
        fn min_is_permutation_invariant(mut xs in prop::collection::vec(ext(), 1..20), seed in any::<u64>()) {
            let m = ext_min(xs.clone()).unwrap();
            let n = xs.len();
            xs.rotate_left((seed as usize) % n);
            xs.reverse();
            prop_assert_eq!(ext_min(xs.clone()).unwrap(), m);
            prop_assert_eq!(ext_min([m, m]).unwrap(), m);
        }

        #[test]
        fn superset_never_raises_min(xs in prop::collection::vec(ext(), 1..20), extra in prop::collection::vec(ext(), 0..10)) {
            let small = ext_min(xs.clone()).unwrap();
            let mut big = xs;
            big.extend(extra);
            prop_assert!(ext_min(big).unwrap() <= small);
        }

        #[test]
        fn affine_monotone_for_positive_scale(a in ext(), b in ext(), c in 0.001f64..100.0, shift in -10.0f64..10.0) {
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            prop_assert!(ext_affine_combine(lo, c, shift).unwrap() <= ext_affine_combine(hi, c, shift).unwrap());
        }
    }
}
