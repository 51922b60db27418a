//! Scalar types the probability engine is generic over.
//!
//! Exact rationals are the default everywhere results are compared for
//! equality; floats are supported for quick numerical work.

use std::fmt::{Debug, Display};
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{FromPrimitive, NumOps, One, Signed, Zero};

pub trait Probability:
    Clone + Debug + PartialEq + PartialOrd + Zero + One + NumOps + Send + Sync + 'static
{
    fn from_ratio(num: i64, den: i64) -> Self;

    /// Text form used in JSON artifacts.
    fn to_text(&self) -> String;

    fn parse_text(s: &str) -> Option<Self>;

    fn half() -> Self {
        Self::from_ratio(1, 2)
    }

    /// Equality up to the scalar's rounding; exact for rationals.
    fn approx_eq(&self, other: &Self) -> bool {
        self == other
    }
}

impl<T> Probability for Ratio<T>
where
    T: Integer + Signed + Clone + Debug + Display + FromStr + FromPrimitive + Send + Sync + 'static,
{
    fn from_ratio(num: i64, den: i64) -> Self {
        let n = T::from_i64(num).expect("numerator fits");
        let d = T::from_i64(den).expect("denominator fits");
        Ratio::new(n, d)
    }

    fn to_text(&self) -> String {
        format!("{}/{}", self.numer(), self.denom())
    }

    fn parse_text(s: &str) -> Option<Self> {
        let s = s.trim();
        match s.split_once('/') {
            Some((n, d)) => {
                let n = T::from_str(n.trim()).ok()?;
                let d = T::from_str(d.trim()).ok()?;
                if d.is_zero() {
                    return None;
                }
                Some(Ratio::new(n, d))
            }
            None => Some(Ratio::from_integer(T::from_str(s).ok()?)),
        }
    }
}

macro_rules! float_probability {
    ($t:ty) => {
        impl Probability for $t {
            fn from_ratio(num: i64, den: i64) -> Self {
                num as $t / den as $t
            }

            fn to_text(&self) -> String {
                self.to_string()
            }

            fn parse_text(s: &str) -> Option<Self> {
                let s = s.trim();
                match s.split_once('/') {
                    Some((n, d)) => Some(n.trim().parse::<$t>().ok()? / d.trim().parse::<$t>().ok()?),
                    None => s.parse().ok(),
                }
            }

            fn approx_eq(&self, other: &Self) -> bool {
                (self - other).abs() <= 1e-5 * (1.0 + self.abs().max(other.abs()))
            }
        }
    };
}

float_probability!(f32);
float_probability!(f64);

pub(crate) fn sum<P: Probability>(it: impl IntoIterator<Item = P>) -> P {
    it.into_iter().fold(P::zero(), |acc, x| acc + x)
}
