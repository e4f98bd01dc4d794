//! Closed intervals with outward rounding, enough for the trace forms.
//!
//! Every operation widens its result by a few ulps so that the enclosure
//! survives the rounding of `libm` and of the arithmetic itself.

use core::f64::consts::{PI, TAU};
use core::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

const REL: f64 = 4.0 * f64::EPSILON;
const ABS: f64 = 1e-300;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        debug_assert!(lo <= hi, "empty interval [{lo}, {hi}]");
        Interval { lo, hi }
    }

    pub fn point(x: f64) -> Self {
        Interval { lo: x, hi: x }
    }

    fn widened(lo: f64, hi: f64) -> Self {
        Interval {
            lo: lo - REL * lo.abs() - ABS,
            hi: hi + REL * hi.abs() + ABS,
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    /// `min |x|` over the interval.
    pub fn mig(&self) -> f64 {
        if self.lo <= 0.0 && self.hi >= 0.0 {
            0.0
        } else {
            self.lo.abs().min(self.hi.abs())
        }
    }

    pub fn scale(self, s: f64) -> Self {
        let (a, b) = (self.lo * s, self.hi * s);
        Self::widened(a.min(b), a.max(b))
    }

    pub fn add_scalar(self, s: f64) -> Self {
        Self::widened(self.lo + s, self.hi + s)
    }

    pub fn sqr(self) -> Self {
        let (a, b) = (self.lo * self.lo, self.hi * self.hi);
        if self.lo <= 0.0 && self.hi >= 0.0 {
            Self::widened(0.0, a.max(b)).clamp_lo(0.0)
        } else {
            Self::widened(a.min(b), a.max(b)).clamp_lo(0.0)
        }
    }

    fn clamp_lo(self, m: f64) -> Self {
        Interval {
            lo: self.lo.max(m),
            hi: self.hi,
        }
    }

    fn clamp_unit(self) -> Self {
        Interval {
            lo: self.lo.max(-1.0),
            hi: self.hi.min(1.0),
        }
    }

    pub fn cos(self) -> Self {
        if self.width() >= TAU {
            return Interval::new(-1.0, 1.0);
        }
        let (ca, cb) = (libm::cos(self.lo), libm::cos(self.hi));
        let mut lo = ca.min(cb);
        let mut hi = ca.max(cb);
        // extrema at multiples of pi; a slightly generous test only widens
        let slack = 1e-12;
        let mut k = libm::ceil((self.lo - slack) / PI);
        while k * PI <= self.hi + slack {
            if libm::fmod(k, 2.0) == 0.0 {
                hi = 1.0;
            } else {
                lo = -1.0;
            }
            k += 1.0;
        }
        Self::widened(lo, hi).clamp_unit()
    }

    pub fn sin(self) -> Self {
        (self - Interval::point(core::f64::consts::FRAC_PI_2)).cos()
    }
}

impl Add for Interval {
    type Output = Interval;
    fn add(self, o: Interval) -> Interval {
        Interval::widened(self.lo + o.lo, self.hi + o.hi)
    }
}

impl Sub for Interval {
    type Output = Interval;
    fn sub(self, o: Interval) -> Interval {
        Interval::widened(self.lo - o.hi, self.hi - o.lo)
    }
}

impl Neg for Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval {
            lo: -self.hi,
            hi: -self.lo,
        }
    }
}

impl Mul for Interval {
    type Output = Interval;
    fn mul(self, o: Interval) -> Interval {
        let p = [self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi];
        let lo = p.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = p.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Interval::widened(lo, hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn encloses(i: Interval, f: impl Fn(f64) -> f64, dom: Interval) {
        for k in 0..=200 {
            let x = dom.lo + dom.width() * k as f64 / 200.0;
            let y = f(x);
            assert!(i.contains(y), "{y} not in {i:?} at {x}");
        }
    }

    #[test]
    fn cos_and_sin_enclose_samples() {
        for (a, b) in [(0.1, 0.2), (-0.3, 0.4), (3.0, 3.3), (1.0, 7.0), (-7.0, -2.0), (2.0, 9.5), (6.2, 6.4)] {
            let d = Interval::new(a, b);
            encloses(d.cos(), libm::cos, d);
            encloses(d.sin(), libm::sin, d);
        }
    }

    #[test]
    fn cos_hits_extrema() {
        let c = Interval::new(-0.1, 0.1).cos();
        assert_eq!(c.hi, 1.0);
        let c = Interval::new(3.0, 3.3).cos();
        assert_eq!(c.lo, -1.0);
        assert!(c.hi < -0.98);
    }

    #[test]
    fn products_and_squares() {
        let a = Interval::new(-1.0, 2.0);
        let b = Interval::new(3.0, 4.0);
        let p = a * b;
        assert!(p.contains(-4.0) && p.contains(8.0) && p.lo > -4.0001 && p.hi < 8.0001);
        let s = a.sqr();
        assert_eq!(s.lo, 0.0);
        assert!(s.contains(4.0));
        assert_eq!(Interval::new(-2.0, -1.0).mig(), 1.0);
        assert_eq!(a.mig(), 0.0);
    }
}
