use std::fmt;

use crate::error::{Error, Result};

/// How a curve continues outside its tabulated range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Extrapolation {
    /// Outside the table is an error.
    None,
    /// Hold the boundary value.
    Clamp,
    /// `asymptote + (v_b - asymptote) (r_b / r)^power`, matched in value at the boundary.
    InversePower { asymptote: f64, power: f64 },
    /// `a / r + b` matched in value and slope at the boundary.
    Coulomb,
    /// Straight line of fixed slope through the boundary value.
    Linear { slope: f64 },
}

impl Extrapolation {
    /// Parses `none`, `clamp`, `coulomb`, `linear:<slope>` or `inverse_power:<asymptote>:<power>`.
    pub fn parse(s: &str) -> Option<Self> {
        let mut parts = s.trim().split(':');
        let head = parts.next()?.trim();
        let nums: Vec<f64> = parts.map(|p| p.trim().parse().ok()).collect::<Option<_>>()?;
        match (head, nums.as_slice()) {
            ("none", []) => Some(Self::None),
            ("clamp", []) => Some(Self::Clamp),
            ("coulomb", []) => Some(Self::Coulomb),
            ("linear", [slope]) => Some(Self::Linear { slope: *slope }),
            ("inverse_power", [asymptote, power]) => Some(Self::InversePower {
                asymptote: *asymptote,
                power: *power,
            }),
            _ => None,
        }
    }
}

impl fmt::Display for Extrapolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::None => write!(f, "none"),
            Self::Clamp => write!(f, "clamp"),
            Self::Coulomb => write!(f, "coulomb"),
            Self::Linear { slope } => write!(f, "linear:{slope}"),
            Self::InversePower { asymptote, power } => write!(f, "inverse_power:{asymptote}:{power}"),
        }
    }
}

/// A tabulated function of R with a not-a-knot cubic spline through the samples.
#[derive(Debug, Clone)]
pub struct CurveTable {
    name: String,
    r: Vec<f64>,
    v: Vec<f64>,
    /// Spline second derivatives at the nodes.
    d2: Vec<f64>,
    below: Extrapolation,
    above: Extrapolation,
}

impl CurveTable {
    pub const MIN_SAMPLES: usize = 10;

    pub fn new(
        name: impl Into<String>,
        r: Vec<f64>,
        v: Vec<f64>,
        below: Extrapolation,
        above: Extrapolation,
    ) -> Result<Self> {
        let name = name.into();
        if r.len() != v.len() {
            return Err(Error::Invariant(format!("{name}: {} R values but {} samples", r.len(), v.len())));
        }
        if r.len() < Self::MIN_SAMPLES {
            return Err(Error::Invariant(format!(
                "{name}: {} samples, need at least {}",
                r.len(),
                Self::MIN_SAMPLES
            )));
        }
        if let Some(i) = r.windows(2).position(|w| !(w[1] > w[0])) {
            return Err(Error::Invariant(format!(
                "{name}: R column not strictly increasing at row {} ({} -> {})",
                i + 2,
                r[i],
                r[i + 1]
            )));
        }
        if r.iter().chain(&v).any(|x| !x.is_finite()) {
            return Err(Error::Invariant(format!("{name}: non-finite sample")));
        }
        let d2 = not_a_knot_spline(&r, &v);
        Ok(Self {
            name,
            r,
            v,
            d2,
            below,
            above,
        })
    }

    /// Parses the two-column text format (`#` starts a comment).
    pub fn parse(name: &str, source: &str, text: &str, below: Extrapolation, above: Extrapolation) -> Result<Self> {
        let mut r = Vec::new();
        let mut v = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: String| Error::Parse {
                path: source.to_string(),
                line: lineno + 1,
                msg,
            };
            let cols: Vec<&str> = line.split_whitespace().collect();
            if cols.len() != 2 {
                return Err(err(format!("expected 2 columns, found {}", cols.len())));
            }
            let x: f64 = cols[0].parse().map_err(|_| err(format!("bad number `{}`", cols[0])))?;
            let y: f64 = cols[1].parse().map_err(|_| err(format!("bad number `{}`", cols[1])))?;
            if let Some(&last) = r.last() {
                if !(x > last) {
                    return Err(err(format!("R = {x} does not increase (previous {last})")));
                }
            }
            r.push(x);
            v.push(y);
        }
        Self::new(name, r, v, below, above)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn r_samples(&self) -> &[f64] {
        &self.r
    }

    pub fn values(&self) -> &[f64] {
        &self.v
    }

    pub fn first(&self) -> f64 {
        self.r[0]
    }

    pub fn last(&self) -> f64 {
        *self.r.last().unwrap()
    }

    pub fn below(&self) -> Extrapolation {
        self.below
    }

    pub fn above(&self) -> Extrapolation {
        self.above
    }

    /// Value at `r`, interpolated or extrapolated.
    pub fn eval(&self, r: f64) -> Result<f64> {
        let (first, last) = (self.first(), self.last());
        if r < first {
            let n = 0;
            return self.extrapolate(self.below, r, first, self.v[n], self.slope_at_node(n));
        }
        if r > last {
            let n = self.r.len() - 1;
            return self.extrapolate(self.above, r, last, self.v[n], self.slope_at_node(n));
        }
        Ok(self.spline(r))
    }

    /// Samples the curve on a set of points; convenient for grids.
    pub fn sample(&self, rs: &[f64]) -> Result<Vec<f64>> {
        rs.iter().map(|&r| self.eval(r)).collect()
    }

    fn extrapolate(&self, rule: Extrapolation, r: f64, rb: f64, vb: f64, slope: f64) -> Result<f64> {
        match rule {
            Extrapolation::None => Err(Error::OutOfDomain {
                curve: self.name.clone(),
                first: if r < rb { rb } else { self.first() },
                r,
            }),
            Extrapolation::Clamp => Ok(vb),
            Extrapolation::InversePower { asymptote, power } => Ok(asymptote + (vb - asymptote) * (rb / r).powf(power)),
            Extrapolation::Coulomb => {
                let a = -slope * rb * rb;
                let b = vb - a / rb;
                Ok(a / r + b)
            }
            Extrapolation::Linear { slope } => Ok(vb + slope * (r - rb)),
        }
    }

    fn segment(&self, r: f64) -> usize {
        let i = self.r.partition_point(|&x| x <= r);
        i.clamp(1, self.r.len() - 1) - 1
    }

    fn spline(&self, r: f64) -> f64 {
        let i = self.segment(r);
        let h = self.r[i + 1] - self.r[i];
        let a = (self.r[i + 1] - r) / h;
        let b = (r - self.r[i]) / h;
        a * self.v[i]
            + b * self.v[i + 1]
            + ((a * a * a - a) * self.d2[i] + (b * b * b - b) * self.d2[i + 1]) * h * h / 6.0
    }

    /// First derivative of the spline.
    pub fn derivative(&self, r: f64) -> f64 {
        let r = r.clamp(self.first(), self.last());
        let i = self.segment(r);
        let h = self.r[i + 1] - self.r[i];
        let a = (self.r[i + 1] - r) / h;
        let b = (r - self.r[i]) / h;
        (self.v[i + 1] - self.v[i]) / h - (3.0 * a * a - 1.0) / 6.0 * h * self.d2[i]
            + (3.0 * b * b - 1.0) / 6.0 * h * self.d2[i + 1]
    }

    fn slope_at_node(&self, n: usize) -> f64 {
        self.derivative(self.r[n])
    }
}

/// Second derivatives of the not-a-knot cubic spline through `(x, y)`; needs 4+ points.
fn not_a_knot_spline(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
    let m = n - 2;
    // tridiagonal system for the interior second derivatives
    let mut sub = vec![0.0; m];
    let mut diag = vec![0.0; m];
    let mut sup = vec![0.0; m];
    let mut rhs = vec![0.0; m];
    for j in 0..m {
        let i = j + 1;
        sub[j] = h[i - 1];
        diag[j] = 2.0 * (h[i - 1] + h[i]);
        sup[j] = h[i];
        rhs[j] = 6.0 * ((y[i + 1] - y[i]) / h[i] - (y[i] - y[i - 1]) / h[i - 1]);
    }
    // continuity of the third derivative across the second and the second-to-last node
    diag[0] += h[0] * (1.0 + h[0] / h[1]);
    sup[0] -= h[0] * h[0] / h[1];
    diag[m - 1] += h[n - 2] * (1.0 + h[n - 2] / h[n - 3]);
    sub[m - 1] -= h[n - 2] * h[n - 2] / h[n - 3];
    for j in 1..m {
        let w = sub[j] / diag[j - 1];
        diag[j] -= w * sup[j - 1];
        rhs[j] -= w * rhs[j - 1];
    }
    let mut d2 = vec![0.0; n];
    d2[m] = rhs[m - 1] / diag[m - 1];
    for j in (0..m - 1).rev() {
        d2[j + 1] = (rhs[j] - sup[j] * d2[j + 2]) / diag[j];
    }
    d2[0] = d2[1] * (1.0 + h[0] / h[1]) - d2[2] * h[0] / h[1];
    d2[n - 1] = d2[n - 2] * (1.0 + h[n - 2] / h[n - 3]) - d2[n - 3] * h[n - 2] / h[n - 3];
    d2
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn table(f: impl Fn(f64) -> f64, below: Extrapolation, above: Extrapolation) -> CurveTable {
        let r: Vec<f64> = (0..40).map(|i| 0.5 + 0.25 * i as f64).collect();
        let v = r.iter().map(|&x| f(x)).collect();
        CurveTable::new("test", r, v, below, above).unwrap()
    }

    #[test]
    fn nodes_are_reproduced() {
        let t = table(|x| (x * 1.3).sin() / x, Extrapolation::None, Extrapolation::None);
        for (r, v) in t.r_samples().iter().zip(t.values()) {
            assert_abs_diff_eq!(t.eval(*r).unwrap(), *v, epsilon = 1e-12);
        }
    }

    #[test]
    fn spline_is_accurate_between_nodes() {
        let t = table(|x| (-0.7 * x).exp(), Extrapolation::None, Extrapolation::None);
        for i in 0..100 {
            let r = 1.0 + 0.07 * i as f64;
            assert_abs_diff_eq!(t.eval(r).unwrap(), (-0.7 * r).exp(), epsilon = 2e-5);
        }
    }

    #[test]
    fn extrapolation_rules() {
        let lin = table(|x| 0.5 * x + 0.1, Extrapolation::Clamp, Extrapolation::Linear { slope: 0.5 });
        assert_abs_diff_eq!(lin.eval(20.0).unwrap(), 10.1, epsilon = 1e-9);
        assert_abs_diff_eq!(lin.eval(0.1).unwrap(), lin.eval(0.5).unwrap(), epsilon = 1e-15);

        let pow = table(
            |x| -0.5 - 2.25 / x.powi(4),
            Extrapolation::Coulomb,
            Extrapolation::InversePower { asymptote: -0.5, power: 4.0 },
        );
        assert_abs_diff_eq!(pow.eval(30.0).unwrap(), -0.5 - 2.25 / 30f64.powi(4), epsilon = 1e-9);

        let r: Vec<f64> = (0..40).map(|i| 0.5 + 0.05 * i as f64).collect();
        let v = r.iter().map(|x| 1.0 / x - 2.0).collect();
        let coul = CurveTable::new("coul", r, v, Extrapolation::Coulomb, Extrapolation::Clamp).unwrap();
        assert_abs_diff_eq!(coul.eval(0.2).unwrap(), 1.0 / 0.2 - 2.0, epsilon = 0.05);
        assert_abs_diff_eq!(coul.eval(0.45).unwrap(), 1.0 / 0.45 - 2.0, epsilon = 1e-3);
        let none = table(|x| x, Extrapolation::None, Extrapolation::None);
        assert!(matches!(none.eval(0.1), Err(Error::OutOfDomain { .. })));
    }

    #[test]
    fn decreasing_column_is_a_parse_error() {
        let mut text = String::from("# test\n");
        for i in 0..12 {
            text.push_str(&format!("{} {}\n", 1.0 + i as f64, i));
        }
        text.push_str("3.0 1.0\n");
        let err = CurveTable::parse("v", "v.dat", &text, Extrapolation::None, Extrapolation::None).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 14, .. }), "{err}");
    }

    #[test]
    fn too_few_samples() {
        let err = CurveTable::new("v", vec![1.0, 2.0], vec![0.0, 0.0], Extrapolation::None, Extrapolation::None);
        assert!(err.is_err());
    }

    #[test]
    fn extrapolation_round_trips_through_text() {
        for rule in [
            Extrapolation::None,
            Extrapolation::Clamp,
            Extrapolation::Coulomb,
            Extrapolation::Linear { slope: 0.5 },
            Extrapolation::InversePower { asymptote: -0.5, power: 4.0 },
        ] {
            assert_eq!(Extrapolation::parse(&rule.to_string()), Some(rule));
        }
        assert_eq!(Extrapolation::parse("cubic"), None);
    }
}
