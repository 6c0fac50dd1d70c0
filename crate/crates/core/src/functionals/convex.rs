use crate::{Error, Result};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Family of a convex function, used to pick closed forms and exact rules.
#[derive(Debug, Clone, PartialEq)]
pub enum PhiKind {
    /// `a t + b`.
    Linear { a: f64, b: f64 },
    /// `t log t` (with value 0 at 0).
    XLogX,
    /// `t^p`, `p >= 1`.
    Power(f64),
    /// `max(t - t0, 0)`.
    Hinge(f64),
    Custom(String),
}

/// A convex function on `[0, 1]` with its left derivative.
#[derive(Clone)]
pub struct ConvexFn {
    kind: PhiKind,
    f: ScalarFn,
    left_derivative: ScalarFn,
}

impl fmt::Debug for ConvexFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ConvexFn").field("kind", &self.kind).finish()
    }
}

impl fmt::Display for ConvexFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.tag())
    }
}

impl ConvexFn {
    pub fn linear(a: f64, b: f64) -> Self {
        Self {
            kind: PhiKind::Linear { a, b },
            f: Arc::new(move |t| a * t + b),
            left_derivative: Arc::new(move |_| a),
        }
    }

    pub fn xlogx() -> Self {
        Self {
            kind: PhiKind::XLogX,
            f: Arc::new(|t: f64| if t > 0.0 { t * t.ln() } else { 0.0 }),
            left_derivative: Arc::new(|t: f64| if t > 0.0 { t.ln() + 1.0 } else { f64::NEG_INFINITY }),
        }
    }

    pub fn power(p: f64) -> Result<Self> {
        if !(p >= 1.0) || !p.is_finite() {
            return Err(Error::Domain(format!("t^p is convex on [0,1] only for p >= 1, got {p}")));
        }
        Ok(Self {
            kind: PhiKind::Power(p),
            f: Arc::new(move |t: f64| t.max(0.0).powf(p)),
            left_derivative: Arc::new(move |t: f64| p * t.max(0.0).powf(p - 1.0)),
        })
    }

    pub fn hinge(t0: f64) -> Result<Self> {
        if !(t0 > 0.0 && t0 < 1.0) {
            return Err(Error::Domain(format!("hinge threshold must lie in (0, 1), got {t0}")));
        }
        Ok(Self {
            kind: PhiKind::Hinge(t0),
            f: Arc::new(move |t: f64| (t - t0).max(0.0)),
            left_derivative: Arc::new(move |t: f64| if t > t0 { 1.0 } else { 0.0 }),
        })
    }

    /// User-supplied function; rejected unless midpoint convex on a 1001-point grid.
    pub fn custom<F, G>(name: &str, f: F, left_derivative: G) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
        G: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        let phi = Self {
            kind: PhiKind::Custom(name.to_string()),
            f: Arc::new(f),
            left_derivative: Arc::new(left_derivative),
        };
        phi.check_convexity()?;
        Ok(phi)
    }

    /// Midpoint convexity `Phi((a+b)/2) <= (Phi(a) + Phi(b))/2 + 1e-12` on all
    /// grid pairs of a 1001-point grid of `[0, 1]`.
    pub fn check_convexity(&self) -> Result<()> {
        const M: usize = 1000;
        let vals: Vec<f64> = (0..=M).map(|i| self.eval(i as f64 / M as f64)).collect();
        if let Some(i) = vals.iter().position(|v| !v.is_finite()) {
            return Err(Error::Domain(format!("Phi is not finite at t = {}", i as f64 / M as f64)));
        }
        for i in 0..=M {
            for j in (i + 2..=M).step_by(2) {
                let mid = vals[(i + j) / 2];
                if mid > 0.5 * (vals[i] + vals[j]) + 1e-12 {
                    return Err(Error::Domain(format!(
                        "Phi fails midpoint convexity between t = {} and t = {}",
                        i as f64 / M as f64,
                        j as f64 / M as f64
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn kind(&self) -> &PhiKind {
        &self.kind
    }

    pub fn is_linear(&self) -> bool {
        matches!(self.kind, PhiKind::Linear { .. })
    }

    pub fn eval(&self, t: f64) -> f64 {
        (self.f)(t)
    }

    pub fn left_derivative(&self, t: f64) -> f64 {
        (self.left_derivative)(t)
    }

    /// Short tag: `linear`, `xlogx`, `power:P`, `hinge:T0` or `custom:NAME`.
    pub fn tag(&self) -> String {
        match &self.kind {
            PhiKind::Linear { a, b } if *a == 1.0 && *b == 0.0 => "linear".into(),
            PhiKind::Linear { a, b } => format!("linear:{a}:{b}"),
            PhiKind::XLogX => "xlogx".into(),
            PhiKind::Power(p) => format!("power:{p}"),
            PhiKind::Hinge(t0) => format!("hinge:{t0}"),
            PhiKind::Custom(name) => format!("custom:{name}"),
        }
    }
}

impl FromStr for ConvexFn {
    type Err = Error;

    /// Parses `linear`, `linear:A:B`, `xlogx`, `power:P` or `hinge:T0`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let num = |x: &str| {
            x.parse::<f64>()
                .map_err(|_| Error::Config(format!("invalid number `{x}` in Phi spec `{s}`")))
        };
        match parts.as_slice() {
            ["linear"] => Ok(Self::linear(1.0, 0.0)),
            ["linear", a, b] => Ok(Self::linear(num(a)?, num(b)?)),
            ["xlogx"] => Ok(Self::xlogx()),
            ["power", p] => Self::power(num(p)?).map_err(|e| Error::Config(e.to_string())),
            ["hinge", t] => Self::hinge(num(t)?).map_err(|e| Error::Config(e.to_string())),
            _ => Err(Error::Config(format!(
                "unknown Phi `{s}` (expected linear, xlogx, power:P or hinge:T0)"
            ))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_are_convex_and_parse() {
        for s in ["linear", "xlogx", "power:2", "hinge:0.3"] {
            let phi: ConvexFn = s.parse().unwrap();
            phi.check_convexity().unwrap();
            assert_eq!(phi.tag(), s);
        }
        let h = ConvexFn::hinge(0.3).unwrap();
        assert_eq!(h.eval(0.2), 0.0);
        assert!((h.eval(0.8) - 0.5).abs() < 1e-15);
        assert!("cube".parse::<ConvexFn>().is_err());
        assert!(ConvexFn::power(0.5).is_err());
    }

    #[test]
    fn concave_custom_is_rejected() {
        assert!(ConvexFn::custom("sqrt", |t: f64| t.sqrt(), |t: f64| 0.5 / t.sqrt()).is_err());
        assert!(ConvexFn::custom("square", |t: f64| t * t, |t: f64| 2.0 * t).is_ok());
    }
}
