use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_complex::Complex64;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

/// An exact phase `exp(2πi·num/den)`, kept reduced with `0 <= num < den`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Phase {
    num: u64,
    den: u64,
}

impl Phase {
    pub const ZERO: Phase = Phase { num: 0, den: 1 };

    pub fn new(num: i128, den: u64) -> Self {
        assert!(den > 0, "phase denominator must be positive");
        let n = num.rem_euclid(den as i128) as u64;
        let g = n.gcd(&den);
        Phase { num: n / g, den: den / g }
    }

    pub fn numerator(self) -> u64 {
        self.num
    }

    pub fn denominator(self) -> u64 {
        self.den
    }

    pub fn is_zero(self) -> bool {
        self.num == 0
    }

    /// The value `t` in `[0, 1)`.
    pub fn turns(self) -> f64 {
        self.num as f64 / self.den as f64
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::from_polar(1.0, std::f64::consts::TAU * self.turns())
    }
}

impl Add for Phase {
    type Output = Phase;
    fn add(self, rhs: Phase) -> Phase {
        let den = self.den.lcm(&rhs.den);
        let n = self.num as i128 * (den / self.den) as i128 + rhs.num as i128 * (den / rhs.den) as i128;
        Phase::new(n, den)
    }
}

impl Neg for Phase {
    type Output = Phase;
    fn neg(self) -> Phase {
        Phase::new(-(self.num as i128), self.den)
    }
}

impl Sub for Phase {
    type Output = Phase;
    fn sub(self, rhs: Phase) -> Phase {
        self + (-rhs)
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}
