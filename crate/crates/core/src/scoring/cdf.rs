//! Complementary error function and the normal CDF.
//!
//! Rational approximations from the FreeBSD `s_erf.c` family (as used by
//! Go's `math.Erfc`), evaluated in the generic scalar type. Absolute error
//! of the resulting CDF is far below 1e-7 in `f64`.

#![allow(clippy::excessive_precision)]

use crate::Scalar;

const ERX: f64 = 8.45062911510467529297e-01;
const PP: [f64; 5] = [
    1.28379167095512558561e-01,
    -3.25042107247001499370e-01,
    -2.84817495755985104766e-02,
    -5.77027029648944159157e-03,
    -2.37630166566501626084e-05,
];
const QQ: [f64; 5] = [
    3.97917223959155352819e-01,
    6.50222499887672944485e-02,
    5.08130628187576562776e-03,
    1.32494738004321644526e-04,
    -3.96022827877536812320e-06,
];
const PA: [f64; 7] = [
    -2.36211856075265944077e-03,
    4.14856118683748331666e-01,
    -3.72207876035701323847e-01,
    3.18346619901161753674e-01,
    -1.10894694282396677476e-01,
    3.54783043256182359371e-02,
    -2.16637559486879084300e-03,
];
const QA: [f64; 6] = [
    1.06420880400844228286e-01,
    5.40397917702171048937e-01,
    7.18286544141962662868e-02,
    1.26171219808761642112e-01,
    1.36370839120290507362e-02,
    1.19844998467991074170e-02,
];
const RA: [f64; 8] = [
    -9.86494403484714822705e-03,
    -6.93858572707181764372e-01,
    -1.05586262253232909814e+01,
    -6.23753324503260060396e+01,
    -1.62396669462573470355e+02,
    -1.84605092906711035994e+02,
    -8.12874355063065934246e+01,
    -9.81432934416914548592e+00,
];
const SA: [f64; 8] = [
    1.96512716674392571292e+01,
    1.37657754143519042600e+02,
    4.34565877475229228821e+02,
    6.45387271733267880336e+02,
    4.29008140027567833386e+02,
    1.08635005541779435134e+02,
    6.57024977031928170135e+00,
    -6.04244152148580987438e-02,
];
const RB: [f64; 7] = [
    -9.86494292470009928597e-03,
    -7.99283237680523006574e-01,
    -1.77579549177547519889e+01,
    -1.60636384855821916062e+02,
    -6.37566443368389627722e+02,
    -1.02509513161107724954e+03,
    -4.83519191608651397019e+02,
];
const SB: [f64; 7] = [
    3.03380607434824582924e+01,
    3.25792512996573918826e+02,
    1.53672958608443695994e+03,
    3.19985821950859553908e+03,
    2.55305040643316442583e+03,
    4.74528541206955367215e+02,
    -2.24409524465858183362e+01,
];

/// c[0] + x·c[1] + x²·c[2] + …
fn poly<T: Scalar>(c: &[f64], x: T) -> T {
    c.iter().rev().fold(T::zero(), |acc, &k| acc * x + T::lit(k))
}

/// 1 + x·c[0] + x²·c[1] + …
fn poly1<T: Scalar>(c: &[f64], x: T) -> T {
    T::one() + x * poly(c, x)
}

pub fn erfc<T: Scalar>(x: T) -> T {
    if x.is_nan() {
        return x;
    }
    let one = T::one();
    let two = T::lit(2.0);
    let neg = x < T::zero();
    let a = x.abs();
    if a < T::lit(0.84375) {
        let z = a * a;
        let y = poly(&PP, z) / poly1(&QQ, z);
        let erf_a = a + a * y;
        return if neg { one + erf_a } else { one - erf_a };
    }
    if a < T::lit(1.25) {
        let s = a - one;
        let erf_a = T::lit(ERX) + poly(&PA, s) / poly1(&QA, s);
        return if neg { one + erf_a } else { one - erf_a };
    }
    if a >= T::lit(28.0) {
        return if neg { two } else { T::zero() };
    }
    let s = one / (a * a);
    let rs = if a < T::lit(1.0 / 0.35) {
        poly(&RA, s) / poly1(&SA, s)
    } else {
        poly(&RB, s) / poly1(&SB, s)
    };
    let r = (-a * a - T::lit(0.5625) + rs).exp() / a;
    if neg { two - r } else { r }
}

pub fn erf<T: Scalar>(x: T) -> T {
    T::one() - erfc(x)
}

/// Φ(z) for the standard normal.
pub fn std_normal_cdf<T: Scalar>(z: T) -> T {
    T::lit(0.5) * erfc(-z / T::SQRT_2())
}
