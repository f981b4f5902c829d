//! Minimal double-double (~32 significant digits) arithmetic for the
//! alternating-series fallback of the Mittag-Leffler evaluator.
//!
//! A value is an unevaluated sum `hi + lo` with `|lo| <= ulp(hi)/2`. Only
//! the operations the series needs are implemented: field ops, `exp`, `ln`,
//! and `ln_gamma` for arguments `>= 1`. Error constants used by callers:
//! one dd operation is accurate to ~`1e-32` relative, `exp`/`ln_gamma`
//! to a few units of that.

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Dd {
    pub hi: f64,
    pub lo: f64,
}

pub(crate) const DD_EPS: f64 = 1.0e-31;

const LN2: Dd = Dd {
    hi: 0.693_147_180_559_945_3,
    lo: 2.319_046_813_846_299_6e-17,
};

const HALF_LN_2PI: Dd = Dd {
    hi: 0.918_938_533_204_672_8,
    lo: -3.878_294_158_067_241_4e-17,
};

/// Asymptotic-series coefficients `B_{2k} / (2k (2k - 1))` for `ln Gamma`,
/// k = 1..12. With the shift threshold 30 the first omitted term is below
/// `3e-34` relative.
const STIRLING: [Dd; 12] = [
    Dd { hi: 0.083_333_333_333_333_33, lo: 4.625_929_269_271_485e-18 },
    Dd { hi: -0.002_777_777_777_777_778, lo: 1.060_108_790_874_715_4e-19 },
    Dd { hi: 0.000_793_650_793_650_793_7, lo: 6.883_823_317_368_282e-22 },
    Dd { hi: -0.000_595_238_095_238_095_3, lo: 5.369_382_187_547_26e-20 },
    Dd { hi: 0.000_841_750_841_750_841_7, lo: 3.687_017_488_923_769_4e-20 },
    Dd { hi: -0.001_917_526_917_526_917_6, lo: 1.067_570_277_687_247_5e-19 },
    Dd { hi: 0.006_410_256_410_256_41, lo: 2.224_004_456_380_521_7e-19 },
    Dd { hi: -0.029_550_653_594_771_242, lo: 4.861_760_957_508_855e-19 },
    Dd { hi: 0.179_644_372_368_830_57, lo: -6.401_600_482_710_946e-19 },
    Dd { hi: -1.392_432_216_905_901_1, lo: 1.583_705_698_923_030_3e-17 },
    Dd { hi: 13.402_864_044_168_393, lo: -6.154_114_101_993_966e-16 },
    Dd { hi: -156.848_284_626_002_03, lo: 9.391_823_141_715_389e-15 },
];

#[inline]
fn two_sum(a: f64, b: f64) -> Dd {
    let hi = a + b;
    let bb = hi - a;
    let lo = (a - (hi - bb)) + (b - bb);
    Dd { hi, lo }
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> Dd {
    // requires |a| >= |b|
    let hi = a + b;
    let lo = b - (hi - a);
    Dd { hi, lo }
}

#[inline]
fn two_prod(a: f64, b: f64) -> Dd {
    let hi = a * b;
    let lo = a.mul_add(b, -hi);
    Dd { hi, lo }
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    #[inline]
    pub fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    /// Exact product of two doubles as a dd value.
    #[inline]
    pub fn prod(a: f64, b: f64) -> Dd {
        two_prod(a, b)
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    #[inline]
    pub fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }

    #[cfg(test)]
    pub fn abs(self) -> Dd {
        if self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0) {
            self.neg()
        } else {
            self
        }
    }

    #[inline]
    pub fn add(self, o: Dd) -> Dd {
        let s = two_sum(self.hi, o.hi);
        let t = two_sum(self.lo, o.lo);
        let mut lo = s.lo + t.hi;
        let r = quick_two_sum(s.hi, lo);
        lo = t.lo + r.lo;
        quick_two_sum(r.hi, lo)
    }

    #[inline]
    pub fn add_f64(self, o: f64) -> Dd {
        let s = two_sum(self.hi, o);
        quick_two_sum(s.hi, s.lo + self.lo)
    }

    #[inline]
    pub fn sub(self, o: Dd) -> Dd {
        self.add(o.neg())
    }

    #[inline]
    pub fn sub_f64(self, o: f64) -> Dd {
        self.add_f64(-o)
    }

    #[inline]
    pub fn mul(self, o: Dd) -> Dd {
        let p = two_prod(self.hi, o.hi);
        let lo = p.lo + self.hi * o.lo + self.lo * o.hi;
        quick_two_sum(p.hi, lo)
    }

    #[inline]
    pub fn mul_f64(self, o: f64) -> Dd {
        let p = two_prod(self.hi, o);
        quick_two_sum(p.hi, p.lo + self.lo * o)
    }

    /// Multiply by an exact power of two.
    #[inline]
    pub fn scale_pow2(self, k: f64) -> Dd {
        Dd {
            hi: self.hi * k,
            lo: self.lo * k,
        }
    }

    pub fn div(self, o: Dd) -> Dd {
        let q1 = self.hi / o.hi;
        let r = self.sub(o.mul_f64(q1));
        let q2 = r.hi / o.hi;
        let r2 = r.sub(o.mul_f64(q2));
        let q3 = r2.hi / o.hi;
        quick_two_sum(q1, q2).add_f64(q3)
    }

    pub fn div_f64(self, o: f64) -> Dd {
        self.div(Dd::from_f64(o))
    }

    pub fn recip(self) -> Dd {
        Dd::ONE.div(self)
    }

    /// `exp(self)`; argument magnitude must stay in the normal f64
    /// exponent range (callers keep it within +-745).
    pub fn exp(self) -> Dd {
        if self.hi < -745.0 {
            return Dd::ZERO;
        }
        assert!(self.hi < 709.0, "dd exp overflow: {}", self.hi);
        let m = (self.hi / LN2.hi).round();
        // r = self - m ln2, |r| <= ln2/2; then scale by 512 and square back
        let r = self.sub(LN2.mul_f64(m)).scale_pow2(1.0 / 512.0);
        // Taylor of exp(r) - 1 to order 13: |r| <= 6.8e-4, next term < 1e-44
        let mut term = Dd::ONE;
        let mut e = Dd::ZERO;
        for k in 1..=13 {
            term = term.mul(r).div_f64(k as f64);
            e = e.add(term);
        }
        // (1 + e)^2 = 1 + (2e + e^2), nine times
        for _ in 0..9 {
            e = e.scale_pow2(2.0).add(e.mul(e));
        }
        let res = e.add_f64(1.0);
        // split the binary exponent so each factor stays in normal range
        let m1 = (m / 2.0).trunc();
        let m2 = m - m1;
        res.scale_pow2(f64::powi(2.0, m1 as i32))
            .scale_pow2(f64::powi(2.0, m2 as i32))
    }

    /// Natural log of a positive value, by Newton refinement of the f64
    /// logarithm: `t <- t + x exp(-t) - 1` converges quadratically.
    pub fn ln(self) -> Dd {
        assert!(self.hi > 0.0, "dd ln of nonpositive value");
        let mut t = Dd::from_f64(self.hi.ln());
        for _ in 0..2 {
            let e = self.mul(t.neg().exp());
            t = t.add(e.sub_f64(1.0));
        }
        t
    }
}

/// `ln Gamma(z)` for `z >= 1`, by argument shifting into the asymptotic
/// regime `w >= 30` and the Stirling series there.
pub(crate) fn ln_gamma_dd(z: Dd) -> Dd {
    assert!(z.hi >= 1.0, "ln_gamma_dd domain: {}", z.hi);
    let mut shift = Dd::ONE;
    let mut w = z;
    while w.hi < 30.0 {
        shift = shift.mul(w);
        w = w.add_f64(1.0);
    }
    let lnw = w.ln();
    let mut s = w.sub_f64(0.5).mul(lnw).sub(w).add(HALF_LN_2PI);
    let w2_inv = w.mul(w).recip();
    let mut pw = w.recip();
    for c in STIRLING {
        s = s.add(c.mul(pw));
        pw = pw.mul(w2_inv);
    }
    if shift.hi != 1.0 || shift.lo != 0.0 {
        s = s.sub(shift.ln());
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_dd_close(got: Dd, want_hi: f64, want_lo: f64, tol: f64) {
        let err = got.sub(Dd { hi: want_hi, lo: want_lo }).abs().to_f64();
        let scale = want_hi.abs().max(1.0);
        assert!(err <= tol * scale, "got ({}, {}), want ({want_hi}, {want_lo})", got.hi, got.lo);
    }

    #[test]
    fn exact_small_arithmetic() {
        let a = Dd::from_f64(0.1);
        let b = Dd::from_f64(0.2);
        let c = a.add(b).sub_f64(0.3);
        // 0.1 + 0.2 - 0.3 in dd captures the f64 representation error
        assert!(c.to_f64().abs() < 1e-16 && c.to_f64() != 0.0);
    }

    #[test]
    fn product_against_exact() {
        let p = Dd::prod(1.0 + 2f64.powi(-30), 1.0 + 2f64.powi(-30));
        // (1 + u)^2 = 1 + 2u + u^2 exactly
        assert_eq!(p.hi + p.lo, (1.0 + 2f64.powi(-29) + 2f64.powi(-60)));
        assert_eq!(p.lo, 2f64.powi(-60));
    }

    #[test]
    fn division_round_trip() {
        let a = Dd::from_f64(1.0).div_f64(3.0);
        let b = a.mul_f64(3.0);
        assert!(b.sub(Dd::ONE).abs().to_f64() < 1e-31);
    }

    #[test]
    fn exp_reference_values() {
        assert_dd_close(
            Dd::from_f64(-3.7).exp(),
            0.024_723_526_470_339_388,
            -1.294_857_794_723_138e-18,
            1e-30,
        );
        assert_dd_close(Dd::ZERO.exp(), 1.0, 0.0, 1e-31);
        assert_eq!(Dd::from_f64(-800.0).exp(), Dd::ZERO);
    }

    #[test]
    fn exp_of_sum_is_product() {
        let a = Dd::from_f64(1.3);
        let b = Dd::from_f64(-0.45);
        let lhs = a.add(b).exp();
        let rhs = a.exp().mul(b.exp());
        assert!(lhs.sub(rhs).abs().to_f64() < 1e-30 * lhs.to_f64().abs());
    }

    #[test]
    fn ln_reference_value() {
        assert_dd_close(
            Dd::from_f64(31.25).ln(),
            3.442_019_376_182_410_7,
            -2.120_676_953_944_115_5e-16,
            1e-30,
        );
    }

    #[test]
    fn ln_inverts_exp() {
        for &x in &[0.03, 0.7, 1.0, 2.5, 40.0, 600.0] {
            let d = Dd::from_f64(x).ln().exp();
            assert!(
                d.sub_f64(x).abs().to_f64() < 1e-29 * x,
                "round trip at {x}"
            );
        }
    }

    #[test]
    fn ln_gamma_reference_values() {
        assert_dd_close(
            ln_gamma_dd(Dd::from_f64(7.3)),
            7.147_892_523_022_248,
            3.798_448_773_389_085e-16,
            1e-29,
        );
        assert_dd_close(
            ln_gamma_dd(Dd::from_f64(1.75)),
            -0.084_401_121_020_485_55,
            -2.643_214_231_401_482_4e-18,
            1e-29,
        );
        assert_dd_close(
            ln_gamma_dd(Dd::from_f64(388.0)),
            1922.808_722_413_807_8,
            7.796_728_675_382_699e-14,
            1e-29,
        );
    }

    #[test]
    fn ln_gamma_recurrence() {
        // ln Gamma(z + 1) = ln Gamma(z) + ln z
        for &z in &[1.0, 2.4, 11.0, 100.5] {
            let lhs = ln_gamma_dd(Dd::from_f64(z + 1.0));
            let rhs = ln_gamma_dd(Dd::from_f64(z)).add(Dd::from_f64(z).ln());
            assert!(
                lhs.sub(rhs).abs().to_f64() < 1e-28 * lhs.to_f64().abs().max(1.0),
                "recurrence at {z}"
            );
        }
    }

    #[test]
    fn ln_gamma_factorials() {
        // Gamma(n) = (n-1)! exactly for small n
        let g6 = ln_gamma_dd(Dd::from_f64(6.0)).exp();
        assert!(g6.sub_f64(120.0).abs().to_f64() < 1e-27);
    }
}
