use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// A finite point of the complex plane, used for evaluation parameters.
///
/// Construction rejects NaN and infinities, so everything downstream can
/// treat the parameter as valid. Bulk results are plain [`Complex64`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ComplexPoint(Complex64);

impl ComplexPoint {
    pub const ZERO: ComplexPoint = ComplexPoint(Complex64::new(0.0, 0.0));

    pub fn new(re: f64, im: f64) -> Result<Self> {
        if re.is_finite() && im.is_finite() {
            Ok(ComplexPoint(Complex64::new(re, im)))
        } else {
            Err(Error::NonFinite { re, im })
        }
    }

    pub fn re(self) -> f64 {
        self.0.re
    }

    pub fn im(self) -> f64 {
        self.0.im
    }

    pub fn value(self) -> Complex64 {
        self.0
    }

    pub fn norm(self) -> f64 {
        self.0.norm()
    }
}

impl TryFrom<Complex64> for ComplexPoint {
    type Error = Error;

    fn try_from(z: Complex64) -> Result<Self> {
        ComplexPoint::new(z.re, z.im)
    }
}

impl From<ComplexPoint> for Complex64 {
    fn from(p: ComplexPoint) -> Self {
        p.0
    }
}

impl fmt::Display for ComplexPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.0.re, self.0.im)
    }
}

/// Parses the `RE,IM` syntax used on the command line.
impl FromStr for ComplexPoint {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let (re, im) = s
            .split_once(',')
            .ok_or_else(|| format!("expected RE,IM but got {s:?}"))?;
        let re: f64 = re.trim().parse().map_err(|e| format!("real part {re:?}: {e}"))?;
        let im: f64 = im.trim().parse().map_err(|e| format!("imaginary part {im:?}: {e}"))?;
        ComplexPoint::new(re, im).map_err(|e| e.to_string())
    }
}

impl Serialize for ComplexPoint {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serialize_complex(&self.0, serializer)
    }
}

/// Serializes a complex number as `{"re": .., "im": ..}`.
pub fn serialize_complex<S: Serializer>(z: &Complex64, serializer: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeStruct;
    let mut st = serializer.serialize_struct("Complex", 2)?;
    st.serialize_field("re", &z.re)?;
    st.serialize_field("im", &z.im)?;
    st.end()
}
