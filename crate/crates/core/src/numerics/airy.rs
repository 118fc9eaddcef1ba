//! Airy function of the first kind and its derivative on the real line.
//!
//! Maclaurin series in the central window, Poincaré asymptotic expansions
//! (truncated at the smallest term) outside it. The oscillatory side needs a
//! window reaching `|x| = 7` on the oscillatory side: there the optimally
//! truncated expansion is good to about `1e-13` (at `x = -4.5` only to `1e-8`).
//! On the decaying side the switch at `5.5` balances series cancellation
//! against the asymptotic truncation error, both near `1e-13`.

use core::f64::consts::{FRAC_PI_4, PI};

use crate::{Error, Result};

pub const AIRY_MIN: f64 = -20.0;
pub const AIRY_MAX: f64 = 10.0;
/// Asymptotic expansion used for `x >= POSITIVE_ASYMPTOTIC_SWITCH`.
pub const POSITIVE_ASYMPTOTIC_SWITCH: f64 = 5.5;
/// Asymptotic expansion used for `x <= NEGATIVE_ASYMPTOTIC_SWITCH`.
pub const NEGATIVE_ASYMPTOTIC_SWITCH: f64 = -7.0;

/// `Ai(0)` and `-Ai'(0)`.
const AI0: f64 = 0.355_028_053_887_817_2;
const MINUS_AIP0: f64 = 0.258_819_403_792_806_8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AiryValue {
    pub ai: f64,
    pub ai_prime: f64,
}

/// `Ai(x)` and `Ai'(x)` for `x` in `[AIRY_MIN, AIRY_MAX]`.
pub fn airy(x: f64) -> Result<AiryValue> {
    if !(AIRY_MIN..=AIRY_MAX).contains(&x) {
        return Err(Error::domain("airy", x, "accurate range is [-20, 10]"));
    }
    Ok(if x >= POSITIVE_ASYMPTOTIC_SWITCH {
        decaying(x)
    } else if x <= NEGATIVE_ASYMPTOTIC_SWITCH {
        oscillating(-x)
    } else {
        maclaurin(x)
    })
}

fn maclaurin(x: f64) -> AiryValue {
    let x3 = x * x * x;
    // f, g and their derivatives, summed term by term.
    let (mut f, mut tf) = (1.0, 1.0);
    let (mut g, mut tg) = (x, x);
    let (mut fp, mut tfp) = (0.0, 0.5 * x * x);
    let (mut gp, mut tgp) = (1.0, 1.0);
    fp += tfp;
    for k in 1..200 {
        let k3 = 3.0 * k as f64;
        tf *= x3 / ((k3 - 1.0) * k3);
        tg *= x3 / (k3 * (k3 + 1.0));
        tgp *= x3 / (k3 * (k3 - 2.0));
        f += tf;
        g += tg;
        gp += tgp;
        if k >= 2 {
            tfp *= x3 / ((k3 - 1.0) * (k3 - 3.0));
            fp += tfp;
        }
        let scale = f.abs() + g.abs() + fp.abs() + gp.abs();
        let last = tf.abs() + tg.abs() + tfp.abs() + tgp.abs();
        if k > 2 && last <= 1e-17 * scale {
            break;
        }
    }
    AiryValue {
        ai: AI0 * f - MINUS_AIP0 * g,
        ai_prime: AI0 * fp - MINUS_AIP0 * gp,
    }
}

/// Coefficients `u_k` of the Airy asymptotic expansions.
struct Coefficients {
    k: usize,
    u: f64,
}

impl Coefficients {
    fn new() -> Self {
        Self { k: 0, u: 1.0 }
    }

    /// Returns `(u_k, v_k)` and advances.
    fn next_pair(&mut self) -> (f64, f64) {
        let k = self.k as f64;
        let u = self.u;
        let v = if self.k == 0 {
            1.0
        } else {
            -(6.0 * k + 1.0) / (6.0 * k - 1.0) * u
        };
        let k1 = k + 1.0;
        self.u *= (6.0 * k1 - 5.0) * (6.0 * k1 - 3.0) * (6.0 * k1 - 1.0) / ((2.0 * k1 - 1.0) * 216.0 * k1);
        self.k += 1;
        (u, v)
    }
}

const MAX_TERMS: usize = 80;

/// Terms `u_k / ζ^k` and `v_k / ζ^k`, truncated before the smallest term
/// starts growing.
fn asymptotic_terms(zeta: f64) -> ([f64; MAX_TERMS], [f64; MAX_TERMS], usize) {
    let mut coeffs = Coefficients::new();
    let mut tu = [0.0; MAX_TERMS];
    let mut tv = [0.0; MAX_TERMS];
    let mut power = 1.0;
    let mut previous = f64::INFINITY;
    let mut count = 0;
    while count < MAX_TERMS {
        let (u, v) = coeffs.next_pair();
        let (a, b) = (u / power, v / power);
        let size = a.abs().max(b.abs());
        if size > previous {
            break;
        }
        tu[count] = a;
        tv[count] = b;
        count += 1;
        previous = size;
        if size < 1e-17 {
            break;
        }
        power *= zeta;
    }
    (tu, tv, count)
}

fn decaying(x: f64) -> AiryValue {
    let zeta = 2.0 / 3.0 * x * libm::sqrt(x);
    let (tu, tv, count) = asymptotic_terms(zeta);
    let alternating = |t: &[f64]| -> f64 {
        t.iter()
            .enumerate()
            .map(|(k, &v)| if k % 2 == 0 { v } else { -v })
            .sum()
    };
    let su = alternating(&tu[..count]);
    let sv = alternating(&tv[..count]);
    let quarter = libm::sqrt(libm::sqrt(x));
    let pref = libm::exp(-zeta) / (2.0 * libm::sqrt(PI));
    AiryValue {
        ai: pref / quarter * su,
        ai_prime: -pref * quarter * sv,
    }
}

/// `(Σ_j (-1)^j t_{2j}, Σ_j (-1)^j t_{2j+1})`.
fn split_alternating(t: &[f64]) -> (f64, f64) {
    let mut even = 0.0;
    let mut odd = 0.0;
    for (k, &v) in t.iter().enumerate() {
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            even += sign * v;
        } else {
            odd += sign * v;
        }
    }
    (even, odd)
}

/// `Ai(-z)`, `Ai'(-z)` for large positive `z`.
fn oscillating(z: f64) -> AiryValue {
    let zeta = 2.0 / 3.0 * z * libm::sqrt(z);
    let (tu, tv, count) = asymptotic_terms(zeta);
    let (pu, qu) = split_alternating(&tu[..count]);
    let (pv, qv) = split_alternating(&tv[..count]);
    let quarter = libm::sqrt(libm::sqrt(z));
    let phase = zeta - FRAC_PI_4;
    let (sin, cos) = (libm::sin(phase), libm::cos(phase));
    let root_pi = libm::sqrt(PI);
    AiryValue {
        ai: (cos * pu + sin * qu) / (root_pi * quarter),
        ai_prime: quarter / root_pi * (sin * pv - cos * qv),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // Reference values from a 30-digit evaluation.
    const REFERENCE: [(f64, f64, f64); 24] = [
        (-19.5, 0.267_800_272_102_583_95, 0.087_741_088_343_757_136),
        (-15.0, 0.278_217_490_870_828_93, 0.272_374_204_308_642_02),
        (-10.0, 0.040_241_238_486_443_191, 0.996_265_044_132_790_06),
        (-8.0, -0.052_705_050_356_386_203, 0.935_560_938_198_306_55),
        (-7.5, 0.321_775_716_380_647_88, 0.318_809_506_698_554_59),
        (-7.0, 0.184_280_835_250_505_64, -0.771_008_168_410_126_55),
        (-5.0, 0.350_761_009_024_114_32, 0.327_192_818_554_443_14),
        (-4.5, 0.292_152_781_055_959_47, -0.523_362_532_315_747_70),
        (-2.0, 0.227_407_428_201_685_58, 0.618_259_020_741_691_04),
        (-0.5, 0.475_728_091_610_539_59, -0.204_081_670_339_547_39),
        (0.0, 0.355_028_053_887_817_24, -0.258_819_403_792_806_80),
        (1.0, 0.135_292_416_312_881_42, -0.159_147_441_296_793_21),
        (3.0, 0.006_591_139_357_460_719_1, -0.011_912_976_705_951_318),
        (4.5, 0.000_330_250_323_514_308_98, -0.000_717_866_567_557_508_89),
        (5.0, 0.000_108_344_428_136_074_42, -0.000_247_413_890_868_462_48),
        (5.4, 4.272_986_169_411_658_4e-5, -0.000_101_184_956_556_993_53),
        (5.5, 3.368_531_190_859_981_4e-5, -8.046_339_130_556_514_3e-5),
        (5.6, 2.650_061_329_684_999_4e-5, -6.384_458_124_617_728_7e-5),
        (6.0, 9.947_694_360_252_889_6e-6, -2.476_520_039_703_495_5e-5),
        (7.0, 7.492_128_863_997_167_1e-7, -2.008_150_894_738_792e-6),
        (-6.9, 0.101_687_997_739_764_83, -0.871_031_058_686_387_41),
        (-7.1, 0.254_036_328_561_978_15, -0.615_528_787_540_228_81),
        (8.0, 4.692_207_616_099_231_6e-8, -1.341_439_297_906_786_6e-7),
        (10.0, 1.104_753_255_289_868_6e-10, -3.520_633_676_738_923_6e-10),
    ];

    #[test]
    fn matches_reference_values() {
        for (x, ai, aip) in REFERENCE {
            let v = airy(x).unwrap();
            assert!((v.ai - ai).abs() < 1e-12, "Ai({x}) = {} vs {ai}", v.ai);
            assert!(
                (v.ai_prime - aip).abs() < 1e-11,
                "Ai'({x}) = {} vs {aip}",
                v.ai_prime
            );
        }
    }

    #[test]
    fn continuous_across_switch_points() {
        for s in [POSITIVE_ASYMPTOTIC_SWITCH, NEGATIVE_ASYMPTOTIC_SWITCH] {
            let a = airy(s - 1e-12).unwrap();
            let b = airy(s + 1e-12).unwrap();
            assert!((a.ai - b.ai).abs() < 1e-11);
            assert!((a.ai_prime - b.ai_prime).abs() < 1e-10);
        }
    }

    #[test]
    fn origin_values_match_series_constants() {
        let v = airy(0.0).unwrap();
        assert!((v.ai - 0.355_028_053_9).abs() < 1e-9);
        assert!((v.ai_prime + 0.258_819_403_8).abs() < 1e-9);
    }

    #[test]
    fn decays_monotonically_on_positive_axis() {
        let mut last = airy(0.0).unwrap().ai;
        for i in 1..=100 {
            let v = airy(0.1 * i as f64).unwrap().ai;
            assert!(v > 0.0 && v < last);
            last = v;
        }
        let ten = airy(10.0).unwrap().ai;
        assert!(ten < 1e-9 && ten < airy(9.0).unwrap().ai);
    }

    #[test]
    fn out_of_range_is_a_domain_error() {
        assert!(matches!(airy(-20.5), Err(Error::Domain { .. })));
        assert!(matches!(airy(10.01), Err(Error::Domain { .. })));
        assert!(airy(f64::NAN).is_err());
    }
}
