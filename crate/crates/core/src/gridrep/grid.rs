use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Periodic position grid `q_i = -L + iΔq`, `Δq = 2L/N`, with the conjugate
/// momentum grid `p_m = ħπm/L` stored in FFT order (`m` wrapped to
/// `(-N/2, N/2]`, so the Nyquist index carries a positive momentum).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawGrid")]
pub struct GridSpec {
    n: usize,
    half_width: f64,
    hbar: f64,
}

#[derive(Deserialize)]
struct RawGrid {
    n: usize,
    half_width: f64,
    hbar: f64,
}

impl TryFrom<RawGrid> for GridSpec {
    type Error = Error;
    fn try_from(raw: RawGrid) -> Result<Self> {
        GridSpec::new(raw.n, raw.half_width, raw.hbar)
    }
}

impl GridSpec {
    pub fn new(n: usize, half_width: f64, hbar: f64) -> Result<Self> {
        if n < 16 || !n.is_power_of_two() {
            return Err(Error::InvalidGrid(format!("N must be a power of two >= 16, got {n}")));
        }
        if !(half_width.is_finite() && half_width > 0.0) {
            return Err(Error::InvalidGrid(format!("L must be positive, got {half_width}")));
        }
        if !(hbar.is_finite() && hbar > 0.0) {
            return Err(Error::InvalidGrid(format!("hbar must be positive, got {hbar}")));
        }
        Ok(Self { n, half_width, hbar })
    }

    /// N = 128, L = 8, ħ = 1.
    pub fn desk() -> Self {
        Self::new(128, 8.0, 1.0).expect("valid default grid")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn dq(&self) -> f64 {
        2.0 * self.half_width / self.n as f64
    }

    pub fn dp(&self) -> f64 {
        PI * self.hbar / self.half_width
    }

    pub fn q(&self, i: usize) -> f64 {
        -self.half_width + i as f64 * self.dq()
    }

    /// Signed frequency index of FFT slot `m`, in `(-N/2, N/2]`.
    pub fn freq_index(&self, m: usize) -> i64 {
        let m = m as i64;
        let n = self.n as i64;
        if m > n / 2 {
            m - n
        } else {
            m
        }
    }

    /// FFT slot of a signed frequency index.
    pub fn slot_of(&self, k: i64) -> usize {
        k.rem_euclid(self.n as i64) as usize
    }

    pub fn p(&self, m: usize) -> f64 {
        self.freq_index(m) as f64 * self.dp()
    }

    /// Wave number `p_m/ħ`.
    pub fn k(&self, m: usize) -> f64 {
        self.freq_index(m) as f64 * PI / self.half_width
    }

    pub fn q_points(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.q(i)).collect()
    }

    /// Momenta in FFT order.
    pub fn p_points(&self) -> Vec<f64> {
        (0..self.n).map(|m| self.p(m)).collect()
    }

    /// FFT slots sorted by increasing momentum.
    pub fn ascending_p_slots(&self) -> Vec<usize> {
        let half = self.n as i64 / 2;
        (-half + 1..=half).map(|k| self.slot_of(k)).collect()
    }

    pub fn check_same(&self, other: &GridSpec) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::GridMismatch { left: self.to_string(), right: other.to_string() })
        }
    }
}

impl fmt::Display for GridSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "N={}, L={}, hbar={}", self.n, self.half_width, self.hbar)
    }
}
