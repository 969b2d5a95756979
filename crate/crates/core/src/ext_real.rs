//   Copyright 2026 relu-unwrap developers
//
//   Licensed under the Apache License, Version 2.0 (the "License");
//   you may not use this file except in compliance with the License.
//   You may obtain a copy of the License at
//
//       http://www.apache.org/licenses/LICENSE-2.0
//
//   Unless required by applicable law or agreed to in writing, software
//   distributed under the License is distributed on an "AS IS" BASIS,
//   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//   See the License for the specific language governing permissions and
//   limitations under the License.

//! Reals extended with `+inf` and `-inf`, with the convention `inf * 0 = 0`.
//!
//! IEEE arithmetic gives `inf * 0 = NaN` and `inf + (-inf) = NaN`; here the
//! former is zero and the latter is reported as a fault.

use core::fmt;
use core::ops::{Mul, Neg};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct ExtendedReal(f64);

impl ExtendedReal {
    pub const ZERO: ExtendedReal = ExtendedReal(0.0);
    pub const INFINITY: ExtendedReal = ExtendedReal(f64::INFINITY);
    pub const NEG_INFINITY: ExtendedReal = ExtendedReal(f64::NEG_INFINITY);

    /// Wraps a value; NaN is rejected.
    pub fn new(v: f64) -> Option<Self> {
        (!v.is_nan()).then_some(ExtendedReal(v))
    }

    pub fn finite(v: f64) -> Self {
        debug_assert!(v.is_finite());
        ExtendedReal(v)
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.0.is_finite()
    }

    /// Sum, failing on `inf + (-inf)`.
    pub fn checked_add(self, rhs: Self) -> Result<Self> {
        let (a, b) = (self.0, rhs.0);
        if a.is_infinite() && b.is_infinite() && a.is_sign_positive() != b.is_sign_positive() {
            return Err(Error::ArithmeticFault);
        }
        Ok(ExtendedReal(a + b))
    }

    pub fn relu(self) -> Self {
        if self.0 > 0.0 {
            self
        } else {
            ExtendedReal::ZERO
        }
    }
}

impl Mul for ExtendedReal {
    type Output = ExtendedReal;

    fn mul(self, rhs: Self) -> Self {
        if self.0 == 0.0 || rhs.0 == 0.0 {
            ExtendedReal::ZERO
        } else {
            ExtendedReal(self.0 * rhs.0)
        }
    }
}

impl Neg for ExtendedReal {
    type Output = ExtendedReal;

    fn neg(self) -> Self {
        ExtendedReal(-self.0)
    }
}

impl From<f64> for ExtendedReal {
    fn from(v: f64) -> Self {
        ExtendedReal::new(v).expect("NaN is not an extended real")
    }
}

impl fmt::Display for ExtendedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 == f64::INFINITY {
            f.write_str("Infinity")
        } else if self.0 == f64::NEG_INFINITY {
            f.write_str("-Infinity")
        } else {
            fmt::Display::fmt(&self.0, f)
        }
    }
}
