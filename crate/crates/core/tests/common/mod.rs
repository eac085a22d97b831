//! Independent adaptive Gauss–Kronrod (7/15) oracle.
#![allow(clippy::excessive_precision)]
#![allow(dead_code)]

const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

fn kronrod(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    for i in 0..7 {
        let s = f(c - h * XGK[i]) + f(c + h * XGK[i]);
        k += WGK[i] * s;
        if i % 2 == 1 {
            g += WG[i / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

/// Adaptive bisection until each panel's Kronrod–Gauss gap is below its
/// share of `abstol`.
pub fn adaptive(f: &dyn Fn(f64) -> f64, a: f64, b: f64, abstol: f64) -> f64 {
    let mut stack = vec![(a, b, 0u32)];
    let mut total = 0.0;
    while let Some((lo, hi, depth)) = stack.pop() {
        let (v, e) = kronrod(f, lo, hi);
        if e <= abstol * (hi - lo) / (b - a) || depth > 40 {
            total += v;
        } else {
            let mid = 0.5 * (lo + hi);
            stack.push((lo, mid, depth + 1));
            stack.push((mid, hi, depth + 1));
        }
    }
    total
}

/// `∫_a^b ∫_c^d f(x, y) dy dx` by nested adaptive rules.
pub fn adaptive_2d(f: &dyn Fn(f64, f64) -> f64, x: (f64, f64), y: (f64, f64), abstol: f64) -> f64 {
    let inner = |xv: f64| adaptive(&|yv| f(xv, yv), y.0, y.1, abstol * 1e-2);
    adaptive(&inner, x.0, x.1, abstol)
}

/// `∫_ℝ f` split at zero over `[−L, L]`.
pub fn line(f: &dyn Fn(f64) -> f64, l: f64, abstol: f64) -> f64 {
    adaptive(f, -l, 0.0, abstol / 2.0) + adaptive(f, 0.0, l, abstol / 2.0)
}
