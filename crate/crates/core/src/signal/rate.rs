use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;

use crate::error::{Error, Result};

/// Sampling frequency as an exact positive rational `num / den` Hz, so rates
/// like 15.5 Hz (31/2) resample on integer grids.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SampleRate {
    num: u64,
    den: u64,
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl SampleRate {
    pub fn new(num: u64, den: u64) -> Result<Self> {
        if num == 0 || den == 0 {
            return Err(Error::invalid(format!("sampling rate {num}/{den} must be positive")));
        }
        let g = gcd(num, den);
        Ok(SampleRate { num: num / g, den: den / g })
    }

    pub fn hz_int(hz: u64) -> Self {
        assert!(hz > 0, "sampling rate must be positive");
        SampleRate { num: hz, den: 1 }
    }

    /// Convert a decimal rate, accepting denominators up to 1000.
    pub fn from_hz(hz: f64) -> Result<Self> {
        if !(hz.is_finite() && hz > 0.0) {
            return Err(Error::invalid(format!("sampling rate {hz} must be positive and finite")));
        }
        for den in 1..=1000u64 {
            let num = hz * den as f64;
            let rounded = num.round();
            if (num - rounded).abs() < 1e-9 * num.max(1.0) && rounded >= 1.0 {
                return SampleRate::new(rounded as u64, den);
            }
        }
        Err(Error::invalid(format!("sampling rate {hz} is not a simple rational")))
    }

    pub fn numer(&self) -> u64 {
        self.num
    }

    pub fn denom(&self) -> u64 {
        self.den
    }

    pub fn hz(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// Integer sample count for a duration, if `seconds * fs` is integral.
    pub fn samples_in(&self, seconds: f64) -> Option<usize> {
        let n = seconds * self.hz();
        let r = n.round();
        if r >= 0.0 && (n - r).abs() < 1e-9 * n.abs().max(1.0) {
            Some(r as usize)
        } else {
            None
        }
    }

    /// `self / other` if it is a positive integer.
    pub fn integer_ratio(&self, other: &SampleRate) -> Option<u64> {
        let n = self.num as u128 * other.den as u128;
        let d = self.den as u128 * other.num as u128;
        (n % d == 0).then(|| (n / d) as u64)
    }

    /// Least common multiple of two rationals: lcm(a, c) / gcd(b, d).
    pub fn lcm(&self, other: &SampleRate) -> Option<SampleRate> {
        let g = gcd(self.num, other.num);
        let num = (self.num / g).checked_mul(other.num)?;
        let den = gcd(self.den, other.den);
        SampleRate::new(num, den).ok()
    }
}

impl fmt::Display for SampleRate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}", self.hz())
        }
    }
}

impl Serialize for SampleRate {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.den == 1 {
            s.serialize_u64(self.num)
        } else {
            s.serialize_f64(self.hz())
        }
    }
}

impl<'de> Deserialize<'de> for SampleRate {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let hz = f64::deserialize(d)?;
        SampleRate::from_hz(hz).map_err(serde::de::Error::custom)
    }
}
