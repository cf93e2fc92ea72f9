//! Edge-step functions `f: N -> [0, 1]`, their partial sums and numeric
//! diagnostics for the regularity conditions used throughout the crate.
//!
//! At time `s >= 2` the process performs a vertex-step with probability
//! `f(s)` and an edge-step otherwise. `f(1)` is never consulted: the process
//! starts from one vertex carrying one loop, which is why
//! `F(t) = 1 + sum_{s=2}^t f(s)` includes the leading `1`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Parameterised family of an edge-step function.
#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    /// `f == p`.
    Constant(f64),
    /// `f(t) = min(1, c * t^-gamma)`.
    RvPower { gamma: f64, scale: f64 },
    /// `f(t) = min(1, 1 / log^alpha t)`.
    LogClass { alpha: f64 },
    /// `f(t) = exp(-log^alpha t)`, `alpha` in `(0, 1)`.
    ExpClass { alpha: f64 },
    /// Alternates between `1` on `[b_{2k}, b_{2k+1}]` and `0` on
    /// `(b_{2k+1}, b_{2k+2})` over the tower `b_0 = 1`, `b_1 = base`,
    /// `b_{k+1} = b_k^2`.
    Oscillating { base: f64 },
    /// `f == 1`: every step is a vertex-step.
    Ba,
    /// `values[i] = f(i + 2)`; `tail` beyond the table.
    Tabulated { values: Vec<f64>, tail: f64 },
}

/// A validated edge-step function.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeStepFunction {
    family: Family,
    name: String,
    /// Oscillating plateau boundaries, empty for other families.
    boundaries: Vec<f64>,
}

fn check_unit(name: &'static str, v: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&v) {
        return Err(Error::param(name, format!("{v} is not in [0, 1]")));
    }
    Ok(())
}

fn check_positive(name: &'static str, v: f64) -> Result<()> {
    if !(v.is_finite() && v > 0.0) {
        return Err(Error::param(name, format!("{v} must be a positive finite number")));
    }
    Ok(())
}

impl EdgeStepFunction {
    /// Validates the family parameters and builds the function.
    pub fn new(family: Family) -> Result<Self> {
        let mut boundaries = Vec::new();
        match &family {
            Family::Constant(p) => check_unit("p", *p)?,
            Family::RvPower { gamma, scale } => {
                check_positive("gamma", *gamma)?;
                check_positive("scale", *scale)?;
            }
            Family::LogClass { alpha } => check_positive("alpha", *alpha)?,
            Family::ExpClass { alpha } => {
                if !(*alpha > 0.0 && *alpha < 1.0) {
                    return Err(Error::param("alpha", format!("{alpha} is not in (0, 1)")));
                }
            }
            Family::Oscillating { base } => {
                if !(base.is_finite() && *base > 1.0) {
                    return Err(Error::param("base", format!("{base} must exceed 1")));
                }
                boundaries.push(1.0);
                let mut b = *base;
                // past 2^64 no time index can reach the next boundary
                while b < 1.9e19 {
                    boundaries.push(b);
                    b *= b;
                }
                boundaries.push(b);
            }
            Family::Ba => {}
            Family::Tabulated { values, tail } => {
                for v in values {
                    check_unit("values", *v)?;
                }
                check_unit("tail", *tail)?;
            }
        }
        let name = describe(&family);
        Ok(Self {
            family,
            name,
            boundaries,
        })
    }

    pub fn constant(p: f64) -> Result<Self> {
        Self::new(Family::Constant(p))
    }

    pub fn ba() -> Self {
        Self::new(Family::Ba).expect("BA has no parameters")
    }

    pub fn rv_power(gamma: f64, scale: f64) -> Result<Self> {
        Self::new(Family::RvPower { gamma, scale })
    }

    pub fn log_class(alpha: f64) -> Result<Self> {
        Self::new(Family::LogClass { alpha })
    }

    pub fn exp_class(alpha: f64) -> Result<Self> {
        Self::new(Family::ExpClass { alpha })
    }

    pub fn oscillating(base: f64) -> Result<Self> {
        Self::new(Family::Oscillating { base })
    }

    pub fn tabulated(values: Vec<f64>, tail: f64) -> Result<Self> {
        Self::new(Family::Tabulated { values, tail })
    }

    /// Tabulates `f` on `2..=horizon` and overrides `f(s)` by `g(s, f(s))`.
    /// Values past the horizon are `tail`.
    pub fn perturbed(
        &self,
        horizon: u64,
        tail: f64,
        g: impl Fn(u64, f64) -> f64,
    ) -> Result<Self> {
        let values = (2..=horizon.max(2)).map(|s| g(s, self.eval(s))).collect();
        Self::tabulated(values, tail)
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    /// Canonical descriptor; parses back to an equal function.
    pub fn name(&self) -> &str {
        &self.name
    }

    /// Oscillating plateau boundaries `b_0 = 1, b_1, b_2, ...`.
    pub fn boundaries(&self) -> &[f64] {
        &self.boundaries
    }

    /// `f(t)` for `t >= 2`, clamped into `[0, 1]`.
    #[inline]
    pub fn eval(&self, t: u64) -> f64 {
        debug_assert!(t >= 2, "f is evaluated from t = 2 on");
        let tf = t as f64;
        let v = match &self.family {
            Family::Constant(p) => *p,
            Family::Ba => 1.0,
            Family::RvPower { gamma, scale } => scale * tf.powf(-gamma),
            Family::LogClass { alpha } => 1.0 / tf.ln().powf(*alpha),
            Family::ExpClass { alpha } => (-tf.ln().powf(*alpha)).exp(),
            Family::Oscillating { .. } => self.oscillating_value(tf),
            Family::Tabulated { values, tail } => {
                let i = (t - 2) as usize;
                values.get(i).copied().unwrap_or(*tail)
            }
        };
        v.clamp(0.0, 1.0)
    }

    fn oscillating_value(&self, t: f64) -> f64 {
        // index of the last boundary <= t
        let i = self.boundaries.partition_point(|&b| b <= t) - 1;
        if self.boundaries[i] == t || i % 2 == 0 {
            1.0
        } else {
            0.0
        }
    }

    /// `F(t) = 1 + sum_{s=2}^t f(s)`; closed form for constant families.
    pub fn partial_sum(&self, t: u64) -> f64 {
        match &self.family {
            Family::Constant(p) => 1.0 + (t.saturating_sub(1)) as f64 * p,
            Family::Ba => t.max(1) as f64,
            _ => 1.0 + (2..=t).map(|s| self.eval(s)).sum::<f64>(),
        }
    }

    /// `sum_{s=a}^b f(s) / (s - 1)`; zero for an empty range.
    pub fn weighted_tail_sum(&self, a: u64, b: u64) -> Result<f64> {
        if a < 2 {
            return Err(Error::param("a", format!("lower limit {a} must be at least 2")));
        }
        Ok((a..=b).map(|s| self.eval(s) / (s - 1) as f64).sum())
    }

    /// Prefix sums `F(1..=horizon)` for repeated queries.
    pub fn prefix_sums(&self, horizon: u64) -> PrefixSums {
        PrefixSums::new(self, horizon)
    }

    /// `sum_{s=2}^{horizon} f(s) (1 - f(s))`, the variance of the vertex count.
    pub fn vertex_count_variance(&self, horizon: u64) -> f64 {
        (2..=horizon)
            .map(|s| {
                let p = self.eval(s);
                p * (1.0 - p)
            })
            .sum()
    }
}

fn describe(family: &Family) -> String {
    match family {
        Family::Constant(p) => format!("const:{p}"),
        Family::Ba => "ba".to_string(),
        Family::RvPower { gamma, scale } if *scale == 1.0 => format!("rv:{gamma}"),
        Family::RvPower { gamma, scale } => format!("rv:{gamma},{scale}"),
        Family::LogClass { alpha } => format!("log_class:{alpha}"),
        Family::ExpClass { alpha } => format!("exp_class:{alpha}"),
        Family::Oscillating { base } => format!("osc:base={base}"),
        Family::Tabulated { values, tail } => {
            let vs: Vec<String> = values.iter().map(|v| v.to_string()).collect();
            format!("table:{};tail={tail}", vs.join(","))
        }
    }
}

impl fmt::Display for EdgeStepFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

impl Serialize for EdgeStepFunction {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.name)
    }
}

impl<'de> Deserialize<'de> for EdgeStepFunction {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

fn malformed(descriptor: &str, reason: impl Into<String>) -> Error {
    Error::MalformedDescriptor {
        descriptor: descriptor.to_string(),
        reason: reason.into(),
    }
}

fn parse_num(descriptor: &str, field: &str, raw: &str) -> Result<f64> {
    raw.trim()
        .parse::<f64>()
        .map_err(|_| malformed(descriptor, format!("`{raw}` is not a number for {field}")))
}

/// Splits `a,b` / `key=a,key2=b` argument lists into positional-or-named values.
fn named_args<'a>(
    descriptor: &str,
    args: &'a str,
    names: &[&str],
) -> Result<Vec<Option<&'a str>>> {
    let mut out = vec![None; names.len()];
    for (pos, part) in args.split(',').enumerate() {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let (slot, value) = match part.split_once('=') {
            Some((k, v)) => {
                let k = k.trim();
                let idx = names
                    .iter()
                    .position(|n| *n == k)
                    .ok_or_else(|| malformed(descriptor, format!("unknown key `{k}`")))?;
                (idx, v)
            }
            None => {
                if pos >= names.len() {
                    return Err(malformed(descriptor, "too many arguments"));
                }
                (pos, part)
            }
        };
        out[slot] = Some(value);
    }
    Ok(out)
}

impl FromStr for EdgeStepFunction {
    type Err = Error;

    /// Parses a family descriptor such as `const:0.3`, `rv:0.5`,
    /// `rv:gamma=0.5,scale=2`, `log_class:1`, `exp_class:0.5`,
    /// `osc:base=10`, `ba` or `table:0.5,0.4;tail=0`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (head, args) = match s.split_once(':') {
            Some((h, a)) => (h.trim(), a.trim()),
            None => (s, ""),
        };
        let need = |v: Option<&str>, field: &str| -> Result<f64> {
            let raw = v.ok_or_else(|| malformed(s, format!("missing {field}")))?;
            parse_num(s, field, raw)
        };
        let family = match head {
            "ba" => {
                if !args.is_empty() {
                    return Err(malformed(s, "ba takes no arguments"));
                }
                Family::Ba
            }
            "const" | "constant" => {
                let a = named_args(s, args, &["p"])?;
                Family::Constant(need(a[0], "p")?)
            }
            "rv" | "rv_power" => {
                let a = named_args(s, args, &["gamma", "scale"])?;
                let scale = match a[1] {
                    Some(raw) => parse_num(s, "scale", raw)?,
                    None => 1.0,
                };
                Family::RvPower {
                    gamma: need(a[0], "gamma")?,
                    scale,
                }
            }
            "log_class" | "log" => {
                let a = named_args(s, args, &["alpha"])?;
                Family::LogClass {
                    alpha: need(a[0], "alpha")?,
                }
            }
            "exp_class" | "exp" => {
                let a = named_args(s, args, &["alpha"])?;
                Family::ExpClass {
                    alpha: need(a[0], "alpha")?,
                }
            }
            "osc" | "oscillating" => {
                let a = named_args(s, args, &["base"])?;
                Family::Oscillating {
                    base: need(a[0], "base")?,
                }
            }
            "table" | "tabulated" => {
                let (vals, tail) = match args.split_once(';') {
                    Some((v, t)) => {
                        let t = t.trim();
                        let raw = t
                            .strip_prefix("tail=")
                            .ok_or_else(|| malformed(s, "expected `tail=` after `;`"))?;
                        (v, Some(parse_num(s, "tail", raw)?))
                    }
                    None => (args, None),
                };
                let values = vals
                    .split(',')
                    .filter(|v| !v.trim().is_empty())
                    .map(|v| parse_num(s, "values", v))
                    .collect::<Result<Vec<f64>>>()?;
                let tail = match tail {
                    Some(t) => t,
                    None => *values
                        .last()
                        .ok_or_else(|| malformed(s, "empty table without tail"))?,
                };
                Family::Tabulated { values, tail }
            }
            _ => return Err(Error::UnknownFamily(head.to_string())),
        };
        EdgeStepFunction::new(family)
    }
}

/// Builds an edge-step function from its descriptor string.
pub fn make_family(descriptor: &str) -> Result<EdgeStepFunction> {
    descriptor.parse()
}

/// Cached `F(t)` for `t` in `1..=horizon`.
#[derive(Debug, Clone)]
pub struct PrefixSums {
    sums: Vec<f64>,
}

impl PrefixSums {
    pub fn new(f: &EdgeStepFunction, horizon: u64) -> Self {
        let horizon = horizon.max(1);
        let mut sums = Vec::with_capacity(horizon as usize);
        sums.push(1.0);
        let mut acc = 1.0;
        for s in 2..=horizon {
            acc += f.eval(s);
            sums.push(acc);
        }
        Self { sums }
    }

    pub fn horizon(&self) -> u64 {
        self.sums.len() as u64
    }

    /// `F(t)`; panics past the cached horizon.
    pub fn get(&self, t: u64) -> f64 {
        assert!(t >= 1, "F is defined from t = 1");
        self.sums[(t - 1) as usize]
    }
}

/// Numeric diagnostics of the regularity conditions at a finite horizon.
#[derive(Debug, Clone, Serialize)]
pub struct ConditionReport {
    pub horizon: u64,
    /// Non-increasing on `2..=horizon`.
    pub is_d: bool,
    /// `is_d` and `f(horizon) < tolerance`.
    pub is_d0: bool,
    /// `sum_{s=2}^{horizon} f(s) / s`.
    pub s_partial: f64,
    /// Contribution of the top decade `(horizon/10, horizon]` to `s_partial`.
    pub s_tail_decade: f64,
    /// Summability heuristic: `s_tail_decade < tolerance`.
    pub is_s: bool,
    pub kappa: f64,
    /// `sum_{s=ceil(horizon^(1/13))}^{horizon} f(s) / s`.
    pub l_kappa_sum: f64,
    /// `l_kappa_sum < (log horizon)^kappa`, checked at the horizon only.
    pub l_kappa_ok: bool,
    /// `-slope` of `log f` against `log t` on `[horizon/10, horizon]`; `None`
    /// when `f` vanishes somewhere on that window.
    pub rv_gamma_estimate: Option<f64>,
    /// Root-mean-square residual of that regression.
    pub rv_residual: Option<f64>,
    pub note: &'static str,
}

/// `ceil(t^(1/13))`, at least 2.
pub fn thirteenth_root_ceil(t: u64) -> u64 {
    let r = (t as f64).powf(1.0 / 13.0).ceil() as u64;
    // guard against powf landing just above an exact integer root
    let r = if r > 1 && (r - 1).checked_pow(13).is_some_and(|p| p >= t) {
        r - 1
    } else {
        r
    };
    r.max(2)
}

const RV_SAMPLES: usize = 256;

/// Numeric condition diagnostics for `f` at `horizon`.
pub fn check_conditions(
    f: &EdgeStepFunction,
    horizon: u64,
    kappa: f64,
    tolerance: f64,
) -> Result<ConditionReport> {
    if horizon < 16 {
        return Err(Error::param("horizon", format!("{horizon} < 16")));
    }
    if !(kappa > 0.0 && kappa < 1.0) {
        return Err(Error::param("kappa", format!("{kappa} is not in (0, 1)")));
    }

    let mut is_d = true;
    let mut prev = f.eval(2);
    let mut s_partial = 0.0;
    let mut s_tail_decade = 0.0;
    let mut l_kappa_sum = 0.0;
    let l_start = thirteenth_root_ceil(horizon);
    let decade_start = horizon / 10;
    for s in 2..=horizon {
        let v = f.eval(s);
        if v > prev {
            is_d = false;
        }
        prev = v;
        let term = v / s as f64;
        s_partial += term;
        if s > decade_start {
            s_tail_decade += term;
        }
        if s >= l_start {
            l_kappa_sum += term;
        }
    }
    let is_d0 = is_d && f.eval(horizon) < tolerance;
    let l_kappa_ok = l_kappa_sum < (horizon as f64).ln().powf(kappa);

    let (rv_gamma_estimate, rv_residual) = match rv_regression(f, horizon) {
        Some((g, r)) => (Some(g), Some(r)),
        None => (None, None),
    };

    Ok(ConditionReport {
        horizon,
        is_d,
        is_d0,
        s_partial,
        s_tail_decade,
        is_s: s_tail_decade < tolerance,
        kappa,
        l_kappa_sum,
        l_kappa_ok,
        rv_gamma_estimate,
        rv_residual,
        note: "L_kappa evaluated at the horizon only",
    })
}

/// Least-squares fit of `log f(t) = a - gamma log t` over log-spaced points of
/// `[max(2, horizon/10), horizon]`.
fn rv_regression(f: &EdgeStepFunction, horizon: u64) -> Option<(f64, f64)> {
    let lo = (horizon / 10).max(2);
    let (llo, lhi) = ((lo as f64).ln(), (horizon as f64).ln());
    let mut ts: Vec<u64> = (0..RV_SAMPLES)
        .map(|i| {
            let x = llo + (lhi - llo) * i as f64 / (RV_SAMPLES - 1) as f64;
            (x.exp().round() as u64).clamp(lo, horizon)
        })
        .collect();
    ts.dedup();
    if ts.len() < 2 {
        return None;
    }
    let mut pts = Vec::with_capacity(ts.len());
    for t in ts {
        let v = f.eval(t);
        if v <= 0.0 {
            return None;
        }
        pts.push(((t as f64).ln(), v.ln()));
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = pts
        .iter()
        .map(|p| (p.1 - intercept - slope * p.0).powi(2))
        .sum();
    Some((-slope, (rss / n).sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn eval_examples() {
        assert_eq!(EdgeStepFunction::constant(0.5).unwrap().eval(7), 0.5);
        assert_eq!(EdgeStepFunction::ba().eval(12345), 1.0);
        let rv = EdgeStepFunction::rv_power(0.5, 1.0).unwrap();
        assert!((rv.eval(100) - 0.1).abs() < 1e-15);
        // clamped below e
        let lc = EdgeStepFunction::log_class(1.0).unwrap();
        assert_eq!(lc.eval(2), 1.0);
        assert!((lc.eval(100) - 1.0 / 100f64.ln()).abs() < 1e-15);
        let ec = EdgeStepFunction::exp_class(0.5).unwrap();
        assert!((ec.eval(100) - (-(100f64.ln().sqrt())).exp()).abs() < 1e-15);
    }

    #[test]
    fn partial_sum_examples() {
        let c = EdgeStepFunction::constant(0.5).unwrap();
        assert_eq!(c.partial_sum(5), 3.0);
        assert_eq!(c.partial_sum(1), 1.0);
        assert_eq!(EdgeStepFunction::ba().partial_sum(1), 1.0);
        let lc = EdgeStepFunction::log_class(1.0).unwrap();
        assert_eq!(lc.partial_sum(1), 1.0);
        // f(2) clamps to 1 since 1/log 2 > 1
        let expected = 1.0 + 1.0 + 1.0 / 3f64.ln() + 1.0 / 4f64.ln();
        assert!((lc.partial_sum(4) - expected).abs() < 1e-14);
        let ps = lc.prefix_sums(4);
        assert!((ps.get(4) - expected).abs() < 1e-14);
    }

    #[test]
    fn weighted_tail_sum_examples() {
        let one = EdgeStepFunction::constant(1.0).unwrap();
        assert_eq!(one.weighted_tail_sum(2, 3).unwrap(), 1.5);
        let lc = EdgeStepFunction::log_class(2.0).unwrap();
        assert_eq!(lc.weighted_tail_sum(2, 2).unwrap(), lc.eval(2));
        let zero = EdgeStepFunction::constant(0.0).unwrap();
        assert_eq!(zero.weighted_tail_sum(2, 100).unwrap(), 0.0);
        assert!(one.weighted_tail_sum(1, 3).is_err());
    }

    #[test]
    fn conditions_constant() {
        let r = check_conditions(&EdgeStepFunction::constant(0.5).unwrap(), 1000, 0.5, 1e-3)
            .unwrap();
        assert!(r.is_d);
        assert!(!r.is_d0);
        let r = check_conditions(&EdgeStepFunction::ba(), 1000, 0.5, 1e-3).unwrap();
        assert_eq!(r.rv_gamma_estimate.map(|g| g.abs() < 1e-12), Some(true));
    }

    #[test]
    fn conditions_rv_index() {
        let f = EdgeStepFunction::rv_power(0.5, 1.0).unwrap();
        // the top decade contributes about 2(10^-2 - 10^-2.5) ~ 0.0137
        let r = check_conditions(&f, 100_000, 0.5, 5e-2).unwrap();
        let g = r.rv_gamma_estimate.unwrap();
        assert!((g - 0.5).abs() < 0.01, "gamma estimate {g}");
        assert!(r.is_d && r.is_d0);
        assert!(r.is_s);
    }

    #[test]
    fn conditions_ba_harmonic() {
        let r = check_conditions(&EdgeStepFunction::ba(), 10_000, 0.5, 1e-3).unwrap();
        // sum_{s=2}^{n} 1/s = H_n - 1
        let h: f64 = (2..=10_000u64).map(|s| 1.0 / s as f64).sum();
        assert!((r.s_partial - h).abs() < 1e-9);
        assert!((r.s_partial - (1e4f64).ln()).abs() < 1.0);
        assert!(!r.is_s);
        assert!(!r.is_d0);
    }

    #[test]
    fn conditions_reject_small_horizon() {
        assert!(check_conditions(&EdgeStepFunction::ba(), 15, 0.5, 1e-3).is_err());
    }

    #[test]
    fn oscillating_tower() {
        let f = make_family("osc:base=10").unwrap();
        assert_eq!(&f.boundaries()[..5], &[1.0, 10.0, 100.0, 1e4, 1e8]);
        assert_eq!(f.eval(2), 1.0);
        assert_eq!(f.eval(10), 1.0);
        assert_eq!(f.eval(11), 0.0);
        assert_eq!(f.eval(99), 0.0);
        assert_eq!(f.eval(100), 1.0);
        assert_eq!(f.eval(10_000), 1.0);
        assert_eq!(f.eval(10_001), 0.0);
        assert_eq!(f.eval(100_000_000), 1.0);
        let r = check_conditions(&f, 1000, 0.5, 1e-3).unwrap();
        assert!(!r.is_d);
    }

    #[test]
    fn descriptors_parse() {
        assert_eq!(
            make_family("const:0.3").unwrap().family(),
            &Family::Constant(0.3)
        );
        assert_eq!(
            make_family("exp_class:0.5").unwrap().family(),
            &Family::ExpClass { alpha: 0.5 }
        );
        assert_eq!(
            make_family("rv:gamma=0.5,scale=2").unwrap().family(),
            &Family::RvPower {
                gamma: 0.5,
                scale: 2.0
            }
        );
        let t = make_family("table:0.5,0.25;tail=0").unwrap();
        assert_eq!((t.eval(2), t.eval(3), t.eval(4)), (0.5, 0.25, 0.0));
        assert_eq!(make_family("table:0.5,0.25").unwrap().eval(9), 0.25);
    }

    #[test]
    fn descriptor_errors_name_the_parameter() {
        let msg = make_family("const:1.5").unwrap_err().to_string();
        assert!(msg.contains("`p`"), "{msg}");
        let msg = make_family("exp_class:1").unwrap_err().to_string();
        assert!(msg.contains("`alpha`"), "{msg}");
        let msg = make_family("osc:base=1").unwrap_err().to_string();
        assert!(msg.contains("`base`"), "{msg}");
        let msg = make_family("rv:-1").unwrap_err().to_string();
        assert!(msg.contains("`gamma`"), "{msg}");
        assert!(matches!(make_family("zipf:1"), Err(Error::UnknownFamily(_))));
        assert!(make_family("const:abc").is_err());
        assert!(make_family("table:0.5,2").is_err());
    }

    #[test]
    fn thirteenth_root() {
        assert_eq!(thirteenth_root_ceil(16), 2);
        assert_eq!(thirteenth_root_ceil(10_000), 3);
        assert_eq!(thirteenth_root_ceil(1 << 13), 2);
        assert_eq!(thirteenth_root_ceil((1 << 13) + 1), 3);
    }

    fn any_family() -> impl Strategy<Value = EdgeStepFunction> {
        prop_oneof![
            (0.0..=1.0f64).prop_map(|p| EdgeStepFunction::constant(p).unwrap()),
            Just(EdgeStepFunction::ba()),
            (0.01..3.0f64, 0.1..5.0f64)
                .prop_map(|(g, c)| EdgeStepFunction::rv_power(g, c).unwrap()),
            (0.05..4.0f64).prop_map(|a| EdgeStepFunction::log_class(a).unwrap()),
            (0.01..0.99f64).prop_map(|a| EdgeStepFunction::exp_class(a).unwrap()),
            (1.5..20.0f64).prop_map(|b| EdgeStepFunction::oscillating(b).unwrap()),
            prop::collection::vec(0.0..=1.0f64, 0..20)
                .prop_map(|v| EdgeStepFunction::tabulated(v, 0.3).unwrap()),
        ]
    }

    fn monotone_family() -> impl Strategy<Value = EdgeStepFunction> {
        prop_oneof![
            (0.0..=1.0f64).prop_map(|p| EdgeStepFunction::constant(p).unwrap()),
            (0.01..3.0f64, 0.1..5.0f64)
                .prop_map(|(g, c)| EdgeStepFunction::rv_power(g, c).unwrap()),
            (0.05..4.0f64).prop_map(|a| EdgeStepFunction::log_class(a).unwrap()),
            (0.01..0.99f64).prop_map(|a| EdgeStepFunction::exp_class(a).unwrap()),
        ]
    }

    proptest! {
        #[test]
        fn eval_in_unit_interval(f in any_family(), t in 2u64..10_000_000) {
            let v = f.eval(t);
            prop_assert!((0.0..=1.0).contains(&v));
        }

        #[test]
        fn partial_sum_increments(f in any_family(), t in 2u64..3000) {
            let d = f.partial_sum(t) - f.partial_sum(t - 1);
            prop_assert!((d - f.eval(t)).abs() < 1e-10);
        }

        #[test]
        fn constant_partial_sum_closed_form(p in 0.0..=1.0f64, t in 1u64..1_000_000) {
            let f = EdgeStepFunction::constant(p).unwrap();
            prop_assert_eq!(f.partial_sum(t), 1.0 + (t - 1) as f64 * p);
        }

        #[test]
        fn monotone_families_report_d(f in monotone_family(), h in 16u64..3000) {
            let r = check_conditions(&f, h, 0.5, 1e-3).unwrap();
            prop_assert!(r.is_d);
            prop_assert!(!r.is_d0 || r.is_d);
        }

        #[test]
        fn s_partial_grows_with_horizon(f in any_family(), h in 16u64..2000, dh in 1u64..500) {
            let a = check_conditions(&f, h, 0.5, 1e-3).unwrap();
            let b = check_conditions(&f, h + dh, 0.5, 1e-3).unwrap();
            prop_assert!(b.s_partial >= a.s_partial);
        }

        #[test]
        fn weighted_tail_sum_additive(f in any_family(), a in 2u64..200, db in 0u64..200, dc in 1u64..200) {
            let b = a + db;
            let c = b + dc;
            let whole = f.weighted_tail_sum(a, c).unwrap();
            let split = f.weighted_tail_sum(a, b).unwrap() + f.weighted_tail_sum(b + 1, c).unwrap();
            prop_assert!((whole - split).abs() < 1e-12);
        }

        #[test]
        fn descriptor_round_trip(f in any_family()) {
            let g: EdgeStepFunction = f.name().parse().unwrap();
            prop_assert_eq!(g, f);
        }
    }
}
