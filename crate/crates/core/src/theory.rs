//! Closed-form expressions and bounds, evaluated for overlay against
//! measurements.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;
use statrs::function::gamma::ln_gamma;

use crate::edgestep::{thirteenth_root_ceil, EdgeStepFunction};
use crate::error::{Error, Result};

/// `ln C(n, k)`.
pub fn ln_binomial(n: u64, k: u64) -> f64 {
    debug_assert!(k <= n);
    if k == 0 || k == n {
        return 0.0;
    }
    if k <= 64 {
        return (0..k)
            .map(|i| ((n - i) as f64).ln() - ((i + 1) as f64).ln())
            .sum();
    }
    ln_gamma(n as f64 + 1.0) - ln_gamma(k as f64 + 1.0) - ln_gamma((n - k) as f64 + 1.0)
}

fn check_probability(name: &'static str, p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::param(name, format!("{p} is not in [0, 1]")));
    }
    Ok(())
}

fn check_degree(d: u64, t: u64) -> Result<()> {
    if d == 0 || d > 2 * t {
        return Err(Error::param("d", format!("degree {d} outside 1..={}", 2 * t)));
    }
    Ok(())
}

/// Law of the one-step degree increment `(P[+0], P[+1], P[+2])` of a vertex
/// of degree `d` in `G_t`, when the next step is a vertex-step with
/// probability `fnext`.
pub fn transition_probs(d: u64, t: u64, fnext: f64) -> Result<(f64, f64, f64)> {
    check_degree(d, t)?;
    check_probability("fnext", fnext)?;
    let x = d as f64 / (2 * t) as f64;
    let f = fnext;
    let y = 1.0 - x;
    Ok((
        f * y + (1.0 - f) * y * y,
        f * x + 2.0 * (1.0 - f) * x * y,
        (1.0 - f) * x * x,
    ))
}

/// [`transition_probs`] in exact rational arithmetic.
pub fn transition_probs_exact(
    d: u64,
    t: u64,
    fnext: &BigRational,
) -> Result<(BigRational, BigRational, BigRational)> {
    check_degree(d, t)?;
    if fnext < &BigRational::zero() || fnext > &BigRational::one() {
        return Err(Error::param("fnext", format!("{fnext} is not in [0, 1]")));
    }
    let one = BigRational::one();
    let two = BigRational::from_integer(BigInt::from(2));
    let x = BigRational::new(BigInt::from(d), BigInt::from(2 * t));
    let y = &one - &x;
    let g = &one - fnext;
    Ok((
        fnext * &y + &g * &y * &y,
        fnext * &x + &two * &g * &x * &y,
        &g * &x * &x,
    ))
}

/// `prod_{s=t0}^{t-1} (1 + 1/s - f(s+1)/(2s))`: the mean degree at time `t` of
/// the vertex born at `t0`.
pub fn expected_degree(f: &EdgeStepFunction, t0: u64, t: u64) -> Result<f64> {
    if t0 < 1 || t0 >= t {
        return Err(Error::param("t0", format!("need 1 <= t0 < t, got t0={t0}, t={t}")));
    }
    Ok((t0..t)
        .map(|s| {
            let s_f = s as f64;
            (1.0 / s_f - f.eval(s + 1) / (2.0 * s_f)).ln_1p()
        })
        .sum::<f64>()
        .exp())
}

fn check_isolated_domain(t: u64, l: u64, xi: f64) -> Result<()> {
    if !(xi > 0.0 && xi < 1.0) {
        return Err(Error::param("xi", format!("{xi} is not in (0, 1)")));
    }
    if l == 0 {
        return Err(Error::param("l", "path size must be at least 1"));
    }
    if 2.0 * l as f64 >= xi * t as f64 {
        return Err(Error::param(
            "l",
            format!("2l = {} must be below xi t = {}", 2 * l, xi * t as f64),
        ));
    }
    Ok(())
}

/// `C(floor((1-xi)t), l) f(t)^l / (2t)^(l-1) (1 - 2l/(xi t))^t`, a lower bound
/// on the mean number of isolated paths of size `l` born in `[xi t, t]`.
pub fn isolated_path_mean_lb(f: &EdgeStepFunction, t: u64, l: u64, xi: f64) -> Result<f64> {
    check_isolated_domain(t, l, xi)?;
    let n = ((1.0 - xi) * t as f64).floor() as u64;
    let ft = f.eval(t);
    if n < l || ft == 0.0 {
        return Ok(0.0);
    }
    let tf = t as f64;
    let ln = ln_binomial(n, l) + l as f64 * ft.ln()
        - (l - 1) as f64 * (2.0 * tf).ln()
        + tf * (-2.0 * l as f64 / (xi * tf)).ln_1p();
    Ok(ln.exp())
}

/// [`isolated_path_mean_lb`] by direct multiplication; underflows for large
/// arguments.
pub fn isolated_path_mean_lb_direct(f: &EdgeStepFunction, t: u64, l: u64, xi: f64) -> Result<f64> {
    check_isolated_domain(t, l, xi)?;
    let n = ((1.0 - xi) * t as f64).floor() as u64;
    if n < l {
        return Ok(0.0);
    }
    let mut binom = 1.0;
    for i in 0..l {
        binom = binom * (n - i) as f64 / (i + 1) as f64;
    }
    let tf = t as f64;
    Ok(binom * f.eval(t).powi(l as i32) / (2.0 * tf).powi(l as i32 - 1)
        * (1.0 - 2.0 * l as f64 / (xi * tf)).powf(tf))
}

fn check_times(s: &[u64]) -> Result<()> {
    if s.len() < 2 {
        return Err(Error::param("s", "need at least two times"));
    }
    if s[0] < 2 {
        return Err(Error::param("s", "times start at 2"));
    }
    if s.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::param("s", "times must be strictly increasing"));
    }
    Ok(())
}

/// `f(s_1) (s_k - 1)/(s_1 + 1) prod_{m=2}^k f(s_m) / (2(s_m - 1))`.
pub fn vertex_path_prob_ub(f: &EdgeStepFunction, s: &[u64]) -> Result<f64> {
    check_times(s)?;
    let k = s[s.len() - 1];
    let mut p = f.eval(s[0]) * (k - 1) as f64 / (s[0] + 1) as f64;
    for &m in &s[1..] {
        p *= f.eval(m) / (2 * (m - 1)) as f64;
    }
    Ok(p)
}

/// `1 + 1/m - f(m+1)/(2m)`, the mean growth factor of a degree at step `m`.
fn growth(f: &EdgeStepFunction, m: u64) -> f64 {
    1.0 + (1.0 - f.eval(m + 1) / 2.0) / m as f64
}

/// Exact probability that `s_1 <- s_2 <- ... <- s_k` is a vertex path.
pub fn vertex_path_prob_exact(f: &EdgeStepFunction, s: &[u64]) -> Result<f64> {
    check_times(s)?;
    let mut p = f.eval(s[0]);
    for w in s.windows(2) {
        let (a, b) = (w[0], w[1]);
        p *= f.eval(b) / (2 * (b - 1)) as f64;
        p *= (a..=b - 2).map(|m| growth(f, m)).product::<f64>();
    }
    Ok(p)
}

fn check_vertex_path_domain(t0: u64, t: u64, k: u64) -> Result<()> {
    if k < 3 {
        return Err(Error::param("k", format!("need k >= 3, got {k}")));
    }
    if t0 < 2 || t0 >= t {
        return Err(Error::param("t0", format!("need 2 <= t0 < t, got t0={t0}, t={t}")));
    }
    Ok(())
}

/// Upper bound on the mean number of vertex paths of length `k` born in
/// `[t0, t]`:
/// `(sum_{j=t0}^t f(j)/(j-1))^(k-2) / (2^(k-1) (k-2)!) *
///  sum_{t0 <= s1 < sk <= t} f(s1) f(sk) / (s1 + 1)`.
pub fn vertex_path_mean_ub(f: &EdgeStepFunction, t0: u64, t: u64, k: u64) -> Result<f64> {
    check_vertex_path_domain(t0, t, k)?;
    let w = f.weighted_tail_sum(t0, t)?;
    let mut suffix = 0.0;
    let mut pairs = 0.0;
    for s in (t0..=t).rev() {
        let fs = f.eval(s);
        pairs += fs / (s + 1) as f64 * suffix;
        suffix += fs;
    }
    if w == 0.0 || pairs == 0.0 {
        return Ok(0.0);
    }
    let km2 = (k - 2) as f64;
    let ln = km2 * w.ln() - (k - 1) as f64 * std::f64::consts::LN_2 - ln_gamma(km2 + 1.0)
        + pairs.ln();
    Ok(ln.exp())
}

/// Exact mean number of vertex paths of length `k` born in `[t0, t]`.
///
/// With `h_1(s) = f(s)` and
/// `h_j(s) = f(s)/(2(s-1)) sum_{r<s} h_{j-1}(r) prod_{m=r}^{s-2} a_m`,
/// where `a_m` is the degree growth factor, the mean is `sum_s h_k(s)`.
pub fn vertex_path_mean_exact(f: &EdgeStepFunction, t0: u64, t: u64, k: u64) -> Result<f64> {
    if k == 0 {
        return Err(Error::param("k", "path length must be at least 1"));
    }
    if t0 < 2 || t0 > t {
        return Err(Error::param("t0", format!("need 2 <= t0 <= t, got t0={t0}, t={t}")));
    }
    let n = (t - t0 + 1) as usize;
    // ln_a[i] = ln prod_{m=t0}^{t0+i-1} a_m, so prod_{m=r}^{s-2} a_m =
    // exp(ln_a[s-1-t0] - ln_a[r-t0])
    let mut ln_a = vec![0.0; n + 1];
    for i in 0..n {
        ln_a[i + 1] = ln_a[i] + growth(f, t0 + i as u64).ln();
    }
    let fv: Vec<f64> = (t0..=t).map(|s| f.eval(s)).collect();
    let mut h = fv.clone();
    for _ in 1..k {
        let mut next = vec![0.0; n];
        let mut acc = 0.0;
        for i in 0..n {
            let s = t0 + i as u64;
            // acc holds sum_{r < s} h(r) exp(-ln_a[r - t0])
            if i > 0 {
                next[i] = fv[i] / (2 * (s - 1)) as f64 * acc * ln_a[i - 1].exp();
            }
            acc += h[i] * (-ln_a[i]).exp();
        }
        h = next;
    }
    Ok(h.iter().sum())
}

/// Regime parameters for [`diameter_theory`].
#[derive(Debug, Clone, Copy, Default)]
pub struct TheoryParams {
    pub kappa: Option<f64>,
    pub gamma: Option<f64>,
    pub epsilon: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Applicability {
    /// The weighted tail sum is below 1.
    pub upper_b: bool,
    pub upper_c: bool,
    pub rv: bool,
    pub clique_lower: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundSet {
    pub t: u64,
    pub diameter_lower: f64,
    pub diameter_upper_a: f64,
    /// `+inf` when inapplicable.
    pub diameter_upper_b: f64,
    pub diameter_upper_c: Option<f64>,
    pub rv_band: Option<(f64, f64)>,
    pub clique_lower: Option<f64>,
    pub clique_upper: f64,
    pub applicable: Applicability,
}

pub fn diameter_lower(f: &EdgeStepFunction, t: u64) -> f64 {
    let lt = (t as f64).ln();
    let llt = lt.ln();
    let neg_log_f = -f.eval(t).ln();
    let second = if neg_log_f > 0.0 { lt / neg_log_f } else { f64::INFINITY };
    (lt / llt).min(second) / 3.0
}

/// Returns the bound and the tail sum it was built from.
pub fn diameter_upper_b(f: &EdgeStepFunction, t: u64) -> Result<(f64, f64)> {
    let lt = (t as f64).ln();
    let w = f.weighted_tail_sum(thirteenth_root_ceil(t), t)?;
    if w >= 1.0 {
        return Ok((f64::INFINITY, w));
    }
    let first = if w > 0.0 { lt / -w.ln() } else { 0.0 };
    Ok((2.0 + 6.0 * first.min(lt / lt.ln()), w))
}

pub fn diameter_upper_c(t: u64, kappa: f64) -> Result<f64> {
    if !(kappa > 0.0 && kappa < 1.0) {
        return Err(Error::param("kappa", format!("{kappa} is not in (0, 1)")));
    }
    let lt = (t as f64).ln();
    Ok(2.0 + 6.0 / (1.0 - kappa) * lt / lt.ln())
}

pub fn rv_band(gamma: f64) -> Result<(f64, f64)> {
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(Error::param("gamma", format!("{gamma} is not in (0, 1)")));
    }
    Ok((1.0 / (4.0 * gamma), 100.0 / gamma + 2.0))
}

pub fn diameter_theory(f: &EdgeStepFunction, t: u64, params: &TheoryParams) -> Result<BoundSet> {
    if t < 16 {
        return Err(Error::param("t", format!("need t >= 16, got {t}")));
    }
    let (upper_b, w) = diameter_upper_b(f, t)?;
    let upper_c = params.kappa.map(|k| diameter_upper_c(t, k)).transpose()?;
    let rv = params.gamma.map(rv_band).transpose()?;
    let clique = match (params.gamma, params.epsilon) {
        (Some(g), Some(e)) => Some(clique_theory(t, g, e)?.0),
        _ => None,
    };
    Ok(BoundSet {
        t,
        diameter_lower: diameter_lower(f, t),
        diameter_upper_a: (t as f64).ln(),
        diameter_upper_b: upper_b,
        diameter_upper_c: upper_c,
        rv_band: rv,
        clique_lower: clique,
        clique_upper: 7.0 * (t as f64).sqrt(),
        applicable: Applicability {
            upper_b: w < 1.0,
            upper_c: upper_c.is_some(),
            rv: rv.is_some(),
            clique_lower: clique.is_some(),
        },
    })
}

/// `(t^((1-gamma)(1-eps)/2), 7 t^(1/2))`.
pub fn clique_theory(t: u64, gamma: f64, eps: f64) -> Result<(f64, f64)> {
    if !(0.0..1.0).contains(&gamma) {
        return Err(Error::param("gamma", format!("{gamma} is not in [0, 1)")));
    }
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::param("epsilon", format!("{eps} is not in (0, 1)")));
    }
    let tf = t as f64;
    Ok((tf.powf((1.0 - gamma) * (1.0 - eps) / 2.0), 7.0 * tf.sqrt()))
}
