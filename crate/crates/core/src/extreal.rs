//! Three-state extended reals.
//!
//! Boundary data for model domains takes values in `[-inf, +inf]`. We keep
//! the infinities symbolic so that arithmetic on finite branches never sees
//! a floating-point infinity.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum ExtReal {
    NegInf,
    Finite(f64),
    PosInf,
}

impl ExtReal {
    pub fn finite(self) -> Option<f64> {
        match self {
            ExtReal::Finite(x) => Some(x),
            _ => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, ExtReal::Finite(_))
    }

    pub fn is_neg_inf(self) -> bool {
        matches!(self, ExtReal::NegInf)
    }

    pub fn is_pos_inf(self) -> bool {
        matches!(self, ExtReal::PosInf)
    }

    /// Partial order on the extended line, total because NaN is rejected at
    /// construction sites.
    pub fn cmp_ext(self, other: ExtReal) -> Ordering {
        use ExtReal::*;
        match (self, other) {
            (NegInf, NegInf) | (PosInf, PosInf) => Ordering::Equal,
            (NegInf, _) | (_, PosInf) => Ordering::Less,
            (PosInf, _) | (_, NegInf) => Ordering::Greater,
            (Finite(a), Finite(b)) => a.partial_cmp(&b).expect("NaN in ExtReal comparison"),
        }
    }

    pub fn min_ext(self, other: ExtReal) -> ExtReal {
        if self.cmp_ext(other) == Ordering::Greater {
            other
        } else {
            self
        }
    }

    pub fn max_ext(self, other: ExtReal) -> ExtReal {
        if self.cmp_ext(other) == Ordering::Less {
            other
        } else {
            self
        }
    }

    /// `self < x` against a finite value.
    pub fn lt_f(self, x: f64) -> bool {
        self.cmp_ext(ExtReal::Finite(x)) == Ordering::Less
    }

    pub fn gt_f(self, x: f64) -> bool {
        self.cmp_ext(ExtReal::Finite(x)) == Ordering::Greater
    }

    /// Value for plotting and grids: infinities clamped to `cap`.
    pub fn clamped(self, cap: f64) -> f64 {
        match self {
            ExtReal::NegInf => -cap,
            ExtReal::Finite(x) => x.clamp(-cap, cap),
            ExtReal::PosInf => cap,
        }
    }
}

impl From<f64> for ExtReal {
    fn from(x: f64) -> Self {
        assert!(!x.is_nan(), "NaN cannot enter ExtReal");
        if x == f64::INFINITY {
            ExtReal::PosInf
        } else if x == f64::NEG_INFINITY {
            ExtReal::NegInf
        } else {
            ExtReal::Finite(x)
        }
    }
}

impl fmt::Display for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtReal::NegInf => write!(f, "-inf"),
            ExtReal::Finite(x) => write!(f, "{x}"),
            ExtReal::PosInf => write!(f, "+inf"),
        }
    }
}
