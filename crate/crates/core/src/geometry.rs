//! Annular domains `Omega = Omega0 \ closed(B_r)` in the plane, their outer
//! outlines, and the Robin weight living on the hole boundary.

use std::f64::consts::{PI, TAU};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Grid used to scan periodic functions of the angle before local refinement.
const SCAN_POINTS: usize = 4096;

/// Star-shaped outline `theta -> rho0(theta) (cos theta, sin theta)` with
/// `rho0(theta) = a0 + sum_k cos[k-1] cos(k theta) + sin[k-1] sin(k theta)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialOutline {
    pub a0: f64,
    #[serde(default, rename = "cos")]
    pub cos_coeffs: Vec<f64>,
    #[serde(default, rename = "sin")]
    pub sin_coeffs: Vec<f64>,
}

impl RadialOutline {
    pub fn circle(radius: f64) -> Self {
        RadialOutline {
            a0: radius,
            cos_coeffs: vec![],
            sin_coeffs: vec![],
        }
    }

    pub fn new(a0: f64, cos_coeffs: Vec<f64>, sin_coeffs: Vec<f64>) -> Result<Self> {
        let outline = RadialOutline {
            a0,
            cos_coeffs,
            sin_coeffs,
        };
        outline.validate()?;
        Ok(outline)
    }

    /// Positivity of `rho0`, checked on the scan grid.
    pub fn validate(&self) -> Result<()> {
        let finite = self.a0.is_finite() && self.cos_coeffs.iter().chain(&self.sin_coeffs).all(|c| c.is_finite());
        if !finite {
            return Err(Error::Geometry("non-finite outline coefficient".into()));
        }
        let min = (0..SCAN_POINTS)
            .map(|i| self.rho(TAU * i as f64 / SCAN_POINTS as f64))
            .fold(f64::INFINITY, f64::min);
        if min <= 0.0 {
            return Err(Error::Geometry(format!("radial function not positive (min {min})")));
        }
        Ok(())
    }

    pub fn is_circle(&self) -> bool {
        self.cos_coeffs.iter().chain(&self.sin_coeffs).all(|&c| c == 0.0)
    }

    pub fn rho(&self, theta: f64) -> f64 {
        let mut value = self.a0;
        for (k, c) in self.cos_coeffs.iter().enumerate() {
            value += c * ((k + 1) as f64 * theta).cos();
        }
        for (k, s) in self.sin_coeffs.iter().enumerate() {
            value += s * ((k + 1) as f64 * theta).sin();
        }
        value
    }

    /// `d rho0 / d theta`, differentiated term by term.
    pub fn d_rho(&self, theta: f64) -> f64 {
        let mut value = 0.0;
        for (k, c) in self.cos_coeffs.iter().enumerate() {
            let kk = (k + 1) as f64;
            value -= kk * c * (kk * theta).sin();
        }
        for (k, s) in self.sin_coeffs.iter().enumerate() {
            let kk = (k + 1) as f64;
            value += kk * s * (kk * theta).cos();
        }
        value
    }

    pub fn point(&self, theta: f64) -> [f64; 2] {
        let rho = self.rho(theta);
        [rho * theta.cos(), rho * theta.sin()]
    }

    /// Arc length `int sqrt(rho0^2 + rho0'^2) dtheta`. The integrand is smooth
    /// and periodic, so the trapezoid rule converges geometrically; the node
    /// count is doubled until successive values agree to 1e-13.
    pub fn perimeter(&self) -> f64 {
        let speed = |t: f64| self.rho(t).hypot(self.d_rho(t));
        periodic_trapezoid(speed, 1e-13)
    }

    /// `(1/2) int rho0^2 dtheta`, area enclosed by the outline.
    pub fn area(&self) -> f64 {
        0.5 * periodic_trapezoid(|t| self.rho(t).powi(2), 1e-13)
    }

    /// `(R_m, R_M)`: global minimum and maximum of `rho0`.
    pub fn extremes(&self) -> (f64, f64) {
        let (_, min) = scan_extremum(|t| -self.rho(t));
        let (_, max) = scan_extremum(|t| self.rho(t));
        (-min, max)
    }

    /// `max_theta sqrt(1 + (rho0'/rho0)^2)`.
    pub fn max_slope_factor(&self) -> f64 {
        let g = |t: f64| (1.0 + (self.d_rho(t) / self.rho(t)).powi(2)).sqrt();
        scan_extremum(g).1
    }
}

fn periodic_trapezoid(f: impl Fn(f64) -> f64, rel_tol: f64) -> f64 {
    let eval = |n: usize| (0..n).map(|i| f(TAU * i as f64 / n as f64)).sum::<f64>() * TAU / n as f64;
    let mut n = 64;
    let mut prev = eval(n);
    while n < (1 << 22) {
        n *= 2;
        let next = eval(n);
        if (next - prev).abs() <= rel_tol * next.abs() {
            return next;
        }
        prev = next;
    }
    prev
}

/// Maximum of a 2pi-periodic function: grid scan then golden-section search
/// in the bracket around the best grid point. Returns `(argmax, max)`.
fn scan_extremum(f: impl Fn(f64) -> f64) -> (f64, f64) {
    let step = TAU / SCAN_POINTS as f64;
    let (mut best_t, mut best) = (0.0, f64::NEG_INFINITY);
    for i in 0..SCAN_POINTS {
        let t = step * i as f64;
        let v = f(t);
        if v > best {
            best = v;
            best_t = t;
        }
    }
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (best_t - step, best_t + step);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..80 {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    let t = 0.5 * (a + b);
    let v = f(t);
    if v >= best {
        (t, v)
    } else {
        (best_t, best)
    }
}

/// Two unit disks joined by the thin rectangle
/// `(-eps/2, eps/2) x (-eps^3/2, eps^3/2)`. Each disk is centered so that its
/// boundary passes through the rectangle corners, and the hole sits at the
/// center of the right-hand lobe.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dumbbell {
    pub eps: f64,
}

impl Dumbbell {
    pub fn new(eps: f64) -> Result<Self> {
        if !(eps > 0.0 && eps <= 0.5) {
            return Err(Error::Parameter(format!(
                "dumbbell eps must lie in (0, 0.5], got {eps}"
            )));
        }
        Ok(Dumbbell { eps })
    }

    pub fn neck_half_length(&self) -> f64 {
        0.5 * self.eps
    }

    pub fn neck_half_width(&self) -> f64 {
        0.5 * self.eps.powi(3)
    }

    /// Distance from a lobe center to the chord glued to the neck.
    pub fn chord_offset(&self) -> f64 {
        (1.0 - self.neck_half_width().powi(2)).sqrt()
    }

    /// Center of the lobe without a hole.
    pub fn solid_center(&self) -> [f64; 2] {
        [-(self.neck_half_length() + self.chord_offset()), 0.0]
    }

    /// Center of the lobe carrying the hole.
    pub fn holed_center(&self) -> [f64; 2] {
        [self.neck_half_length() + self.chord_offset(), 0.0]
    }

    /// Half-angle subtended by the glued chord, seen from a lobe center.
    pub fn chord_half_angle(&self) -> f64 {
        self.neck_half_width().asin()
    }

    pub fn perimeter(&self) -> f64 {
        2.0 * (TAU - 2.0 * self.chord_half_angle()) + 2.0 * self.eps
    }
}

/// Outer outline of the annular domain.
#[derive(Debug, Clone, PartialEq)]
pub enum Outline {
    Radial(RadialOutline),
    /// Counterclockwise simple polygon.
    Polygon(Vec<[f64; 2]>),
    Dumbbell(Dumbbell),
}

impl Outline {
    pub fn kind(&self) -> &'static str {
        match self {
            Outline::Radial(_) => "radial",
            Outline::Polygon(_) => "polygon",
            Outline::Dumbbell(_) => "dumbbell",
        }
    }
}

/// `Omega = Omega0 \ closed(B_r)`, the hole centered at the origin (or at the
/// holed lobe center for the dumbbell).
#[derive(Debug, Clone, PartialEq)]
pub struct AnnularDomain {
    pub outline: Outline,
    pub hole_radius: f64,
}

impl AnnularDomain {
    pub fn new(outline: Outline, hole_radius: f64) -> Result<Self> {
        let domain = AnnularDomain { outline, hole_radius };
        domain.validate()?;
        Ok(domain)
    }

    /// Circle of radius `outer` with a hole of radius `r`: the shell `A(r, outer)`.
    pub fn shell(r: f64, outer: f64) -> Result<Self> {
        Self::new(Outline::Radial(RadialOutline::circle(outer)), r)
    }

    pub fn validate(&self) -> Result<()> {
        let r = self.hole_radius;
        if !(r.is_finite() && r > 0.0) {
            return Err(Error::Geometry(format!("hole radius must be positive, got {r}")));
        }
        match &self.outline {
            Outline::Radial(o) => {
                o.validate()?;
                let (rm, _) = o.extremes();
                if r >= rm {
                    return Err(Error::Geometry(format!(
                        "hole radius {r} does not fit inside the outline (R_m = {rm})"
                    )));
                }
            }
            Outline::Polygon(v) => validate_polygon(v, r)?,
            Outline::Dumbbell(d) => {
                Dumbbell::new(d.eps)?;
                if r >= 1.0 {
                    return Err(Error::Geometry(format!(
                        "hole radius {r} must be below the lobe radius 1"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn hole_center(&self) -> [f64; 2] {
        match &self.outline {
            Outline::Dumbbell(d) => d.holed_center(),
            _ => [0.0, 0.0],
        }
    }

    pub fn radial(&self) -> Result<&RadialOutline> {
        match &self.outline {
            Outline::Radial(o) => Ok(o),
            other => Err(Error::UnsupportedOutline(other.kind())),
        }
    }

    /// `rho0(theta)` for radial outlines.
    pub fn rho(&self, theta: f64) -> Result<f64> {
        Ok(self.radial()?.rho(theta))
    }

    pub fn d_rho(&self, theta: f64) -> Result<f64> {
        Ok(self.radial()?.d_rho(theta))
    }

    /// `P(Omega0)`.
    pub fn outer_perimeter(&self) -> f64 {
        match &self.outline {
            Outline::Radial(o) => o.perimeter(),
            Outline::Polygon(v) => polygon_perimeter(v),
            Outline::Dumbbell(d) => d.perimeter(),
        }
    }

    /// `P(B_r) = 2 pi r`.
    pub fn inner_perimeter(&self) -> f64 {
        TAU * self.hole_radius
    }

    /// `|Omega|`.
    pub fn area(&self) -> f64 {
        let outer = match &self.outline {
            Outline::Radial(o) => o.area(),
            Outline::Polygon(v) => polygon_signed_area(v),
            Outline::Dumbbell(d) => {
                // two disks minus the caps cut by the chords, plus the neck
                let a = d.chord_half_angle();
                let cap = a - a.sin() * a.cos();
                2.0 * (PI - cap) + d.eps.powi(4)
            }
        };
        outer - PI * self.hole_radius.powi(2)
    }

    /// `(R_m, R_M)` for radial outlines.
    pub fn radial_extremes(&self) -> Result<(f64, f64)> {
        Ok(self.radial()?.extremes())
    }

    /// `R_M^(n-1) max sqrt(1 + |grad_tau rho0|^2 / rho0^2)` with `n = 2`.
    pub fn starshape_factor(&self) -> Result<f64> {
        let o = self.radial()?;
        Ok(o.extremes().1 * o.max_slope_factor())
    }
}

fn polygon_signed_area(v: &[[f64; 2]]) -> f64 {
    let n = v.len();
    0.5 * (0..n)
        .map(|i| {
            let (a, b) = (v[i], v[(i + 1) % n]);
            a[0] * b[1] - a[1] * b[0]
        })
        .sum::<f64>()
}

fn polygon_perimeter(v: &[[f64; 2]]) -> f64 {
    let n = v.len();
    (0..n)
        .map(|i| {
            let (a, b) = (v[i], v[(i + 1) % n]);
            (b[0] - a[0]).hypot(b[1] - a[1])
        })
        .sum()
}

fn segment_distance(p: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    let d = [b[0] - a[0], b[1] - a[1]];
    let len2 = d[0] * d[0] + d[1] * d[1];
    let t = (((p[0] - a[0]) * d[0] + (p[1] - a[1]) * d[1]) / len2).clamp(0.0, 1.0);
    (p[0] - a[0] - t * d[0]).hypot(p[1] - a[1] - t * d[1])
}

fn segments_cross(a: [f64; 2], b: [f64; 2], c: [f64; 2], d: [f64; 2]) -> bool {
    let orient = |p: [f64; 2], q: [f64; 2], r: [f64; 2]| (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0]);
    let (o1, o2) = (orient(a, b, c), orient(a, b, d));
    let (o3, o4) = (orient(c, d, a), orient(c, d, b));
    o1 * o2 < 0.0 && o3 * o4 < 0.0
}

fn validate_polygon(v: &[[f64; 2]], r: f64) -> Result<()> {
    let n = v.len();
    if n < 3 {
        return Err(Error::Geometry("polygon needs at least 3 vertices".into()));
    }
    if v.iter().flatten().any(|c| !c.is_finite()) {
        return Err(Error::Geometry("non-finite polygon vertex".into()));
    }
    if polygon_signed_area(v) <= 0.0 {
        return Err(Error::Geometry("polygon must be counterclockwise".into()));
    }
    for i in 0..n {
        for j in i + 1..n {
            // skip adjacent edges
            if j == i + 1 || (i == 0 && j == n - 1) {
                continue;
            }
            if segments_cross(v[i], v[(i + 1) % n], v[j], v[(j + 1) % n]) {
                return Err(Error::Geometry(format!("polygon edges {i} and {j} intersect")));
            }
        }
    }
    // winding number of the origin
    let mut winding = 0.0;
    for i in 0..n {
        let (a, b) = (v[i], v[(i + 1) % n]);
        winding += (a[0] * b[1] - a[1] * b[0]).atan2(a[0] * b[0] + a[1] * b[1]);
    }
    if (winding / TAU).round() != 1.0 {
        return Err(Error::Geometry("polygon does not enclose the origin".into()));
    }
    let clearance = (0..n)
        .map(|i| segment_distance([0.0, 0.0], v[i], v[(i + 1) % n]))
        .fold(f64::INFINITY, f64::min);
    if r >= clearance {
        return Err(Error::Geometry(format!(
            "hole radius {r} does not fit inside the polygon (clearance {clearance})"
        )));
    }
    Ok(())
}

/// Positive Robin weight on the hole boundary, parametrized by the polar angle
/// around the hole center.
#[derive(Debug, Clone, PartialEq)]
pub enum BetaSpec {
    Constant(f64),
    /// `values[i]` holds on `[breaks[i], breaks[i+1])`, the last piece wrapping
    /// around to `breaks[0] + 2 pi`.
    PiecewiseAngular {
        breaks: Vec<f64>,
        values: Vec<f64>,
    },
}

impl BetaSpec {
    pub fn constant(value: f64) -> Result<Self> {
        let b = BetaSpec::Constant(value);
        b.validate()?;
        Ok(b)
    }

    pub fn piecewise(breaks: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        let b = BetaSpec::PiecewiseAngular { breaks, values };
        b.validate()?;
        Ok(b)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |v: f64| v.is_finite() && v > 0.0;
        match self {
            BetaSpec::Constant(v) => {
                if !positive(*v) {
                    return Err(Error::Weight(format!("Robin weight must be positive, got {v}")));
                }
            }
            BetaSpec::PiecewiseAngular { breaks, values } => {
                if breaks.is_empty() || breaks.len() != values.len() {
                    return Err(Error::Weight(
                        "piecewise weight needs as many values as breakpoints (at least one)".into(),
                    ));
                }
                if breaks.iter().any(|b| !(0.0..TAU).contains(b)) {
                    return Err(Error::Weight("breakpoints must lie in [0, 2pi)".into()));
                }
                if breaks.windows(2).any(|w| w[1] <= w[0]) {
                    return Err(Error::Weight("breakpoints must be strictly increasing".into()));
                }
                if let Some(v) = values.iter().find(|v| !positive(**v)) {
                    return Err(Error::Weight(format!("Robin weight must be positive, got {v}")));
                }
            }
        }
        Ok(())
    }

    pub fn value_at(&self, theta: f64) -> f64 {
        match self {
            BetaSpec::Constant(v) => *v,
            BetaSpec::PiecewiseAngular { breaks, values } => {
                let t = theta.rem_euclid(TAU);
                match breaks.iter().rposition(|&b| b <= t) {
                    Some(i) => values[i],
                    None => *values.last().expect("validated non-empty"),
                }
            }
        }
    }

    /// `inf beta`.
    pub fn infimum(&self) -> f64 {
        match self {
            BetaSpec::Constant(v) => *v,
            BetaSpec::PiecewiseAngular { values, .. } => values.iter().copied().fold(f64::INFINITY, f64::min),
        }
    }

    pub fn as_constant(&self) -> Option<f64> {
        match self {
            BetaSpec::Constant(v) => Some(*v),
            BetaSpec::PiecewiseAngular { .. } => None,
        }
    }

    /// Short label for reports.
    pub fn label(&self) -> String {
        match self {
            BetaSpec::Constant(v) => format!("{v}"),
            BetaSpec::PiecewiseAngular { values, .. } => {
                let vals: Vec<String> = values.iter().map(|v| v.to_string()).collect();
                format!("piecewise[{}]", vals.join(";"))
            }
        }
    }
}

/// `m = ||beta||_{L^1(dB_r)}`.
pub fn beta_l1_norm(beta: &BetaSpec, r: f64) -> Result<f64> {
    beta.validate()?;
    if !(r > 0.0) {
        return Err(Error::Parameter(format!("hole radius must be positive, got {r}")));
    }
    Ok(match beta {
        BetaSpec::Constant(v) => v * TAU * r,
        BetaSpec::PiecewiseAngular { breaks, values } => {
            let n = breaks.len();
            let sum: f64 = (0..n)
                .map(|i| {
                    let end = if i + 1 < n { breaks[i + 1] } else { breaks[0] + TAU };
                    values[i] * (end - breaks[i])
                })
                .sum();
            r * sum
        }
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum OutlineConfig {
    Radial {
        a0: f64,
        #[serde(default)]
        cos: Vec<f64>,
        #[serde(default)]
        sin: Vec<f64>,
    },
    Polygon {
        vertices: Vec<[f64; 2]>,
    },
    Dumbbell {
        eps: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum BetaConfig {
    Constant { value: f64 },
    Piecewise { breaks: Vec<f64>, values: Vec<f64> },
}

/// JSON form of a domain together with its Robin weight.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainConfig {
    pub outline: OutlineConfig,
    pub hole_radius: f64,
    pub beta: BetaConfig,
}

impl DomainConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// Validated domain and weight.
    pub fn build(&self) -> Result<(AnnularDomain, BetaSpec)> {
        let outline = match &self.outline {
            OutlineConfig::Radial { a0, cos, sin } => {
                Outline::Radial(RadialOutline::new(*a0, cos.clone(), sin.clone())?)
            }
            OutlineConfig::Polygon { vertices } => Outline::Polygon(vertices.clone()),
            OutlineConfig::Dumbbell { eps } => Outline::Dumbbell(Dumbbell::new(*eps)?),
        };
        let domain = AnnularDomain::new(outline, self.hole_radius)?;
        let beta = match &self.beta {
            BetaConfig::Constant { value } => BetaSpec::constant(*value)?,
            BetaConfig::Piecewise { breaks, values } => BetaSpec::piecewise(breaks.clone(), values.clone())?,
        };
        Ok((domain, beta))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn ellipse_like() -> RadialOutline {
        RadialOutline::new(1.5, vec![0.0, 0.3], vec![]).unwrap()
    }

    #[test]
    fn circle_radial_function() {
        let c = RadialOutline::circle(2.0);
        for i in 0..10 {
            let t = 0.7 * i as f64;
            assert_eq!(c.rho(t), 2.0);
            assert_eq!(c.d_rho(t), 0.0);
        }
        assert_relative_eq!(c.perimeter(), 4.0 * PI, max_relative = 1e-14);
        assert_eq!(c.extremes(), (2.0, 2.0));
    }

    #[test]
    fn single_harmonic_values() {
        let o = ellipse_like();
        assert_relative_eq!(o.rho(0.0), 1.8, max_relative = 1e-15);
        assert!(o.d_rho(0.0).abs() < 1e-15);
        assert_relative_eq!(o.rho(PI / 4.0), 1.5, max_relative = 1e-15);
        assert_relative_eq!(o.d_rho(PI / 4.0), -0.6, max_relative = 1e-14);
        for t in [0.1, 1.3, 4.0] {
            assert!((o.rho(t + TAU) - o.rho(t)).abs() < 1e-14);
        }
    }

    #[test]
    fn extremes_of_single_harmonic() {
        let (rm, rmax) = ellipse_like().extremes();
        assert_relative_eq!(rm, 1.2, max_relative = 1e-12);
        assert_relative_eq!(rmax, 1.8, max_relative = 1e-12);
    }

    #[test]
    fn perimeter_against_fine_trapezoid() {
        let o = ellipse_like();
        let n = 1_000_000;
        let brute: f64 = (0..n)
            .map(|i| {
                let t = TAU * (i as f64 + 0.5) / n as f64;
                o.rho(t).hypot(o.d_rho(t))
            })
            .sum::<f64>()
            * TAU
            / n as f64;
        assert_relative_eq!(o.perimeter(), brute, max_relative = 1e-8);
    }

    #[test]
    fn starshape_factor_against_scan() {
        let d = AnnularDomain::new(Outline::Radial(ellipse_like()), 0.5).unwrap();
        let n = 1_000_000;
        let brute = (0..n)
            .map(|i| {
                let t = TAU * i as f64 / n as f64;
                let ratio = 0.6 * (2.0 * t).sin() / (1.5 + 0.3 * (2.0 * t).cos());
                (1.0 + ratio * ratio).sqrt()
            })
            .fold(0.0, f64::max);
        let f = d.starshape_factor().unwrap();
        assert_relative_eq!(f, 1.8 * brute, max_relative = 1e-9);
        assert!(f >= 1.8);
        let circle = AnnularDomain::shell(1.0, 2.0).unwrap();
        assert_eq!(circle.starshape_factor().unwrap(), 2.0);
    }

    #[test]
    fn polygon_perimeter_and_errors() {
        let square = vec![[-0.5, -0.5], [0.5, -0.5], [0.5, 0.5], [-0.5, 0.5]];
        let d = AnnularDomain::new(Outline::Polygon(square.clone()), 0.2).unwrap();
        assert_relative_eq!(d.outer_perimeter(), 4.0);
        assert!(matches!(d.rho(0.0), Err(Error::UnsupportedOutline("polygon"))));
        assert!(d.starshape_factor().is_err());
        assert!(AnnularDomain::new(Outline::Polygon(square.clone()), 0.6).is_err());
        let mut cw = square.clone();
        cw.reverse();
        assert!(AnnularDomain::new(Outline::Polygon(cw), 0.2).is_err());
        let bowtie = vec![[-0.5, -0.5], [0.5, 0.5], [0.5, -0.5], [-0.5, 0.5]];
        assert!(AnnularDomain::new(Outline::Polygon(bowtie), 0.1).is_err());
    }

    #[test]
    fn hole_must_fit() {
        assert!(AnnularDomain::new(Outline::Radial(ellipse_like()), 1.2).is_err());
        assert!(AnnularDomain::new(Outline::Radial(ellipse_like()), 1.19).is_ok());
        assert!(AnnularDomain::new(Outline::Dumbbell(Dumbbell { eps: 0.2 }), 1.0).is_err());
    }

    #[test]
    fn beta_norms() {
        let c = BetaSpec::constant(1.0).unwrap();
        assert_relative_eq!(beta_l1_norm(&c, 1.0).unwrap(), TAU);
        let p = BetaSpec::piecewise(vec![0.0, PI], vec![2.0, 4.0]).unwrap();
        assert_relative_eq!(beta_l1_norm(&p, 1.0).unwrap(), 6.0 * PI, max_relative = 1e-15);
        assert_eq!(p.infimum(), 2.0);
        assert_eq!(p.value_at(1.0), 2.0);
        assert_eq!(p.value_at(4.0), 4.0);
        assert_eq!(p.value_at(-0.5), 4.0);
        for r in [0.3, 1.0, 2.5] {
            let m = beta_l1_norm(&BetaSpec::Constant(3.0), r).unwrap();
            assert_relative_eq!(m / (TAU * r), 3.0, max_relative = 1e-15);
        }
        assert!(BetaSpec::constant(0.0).is_err());
        assert!(BetaSpec::piecewise(vec![1.0, 0.5], vec![1.0, 1.0]).is_err());
        assert!(BetaSpec::piecewise(vec![0.0], vec![-1.0]).is_err());
    }

    #[test]
    fn dumbbell_geometry() {
        let d = Dumbbell::new(0.2).unwrap();
        let c = d.solid_center();
        // corner of the neck lies on the solid lobe's circle
        let corner = [-0.1, 0.004];
        assert_relative_eq!((corner[0] - c[0]).hypot(corner[1] - c[1]), 1.0, max_relative = 1e-15);
        assert!(Dumbbell::new(0.6).is_err());
    }

    #[test]
    fn config_round_trip() {
        let text = r#"{"outline":{"type":"radial","a0":1.5,"cos":[0,0.3]},"hole_radius":0.5,
                       "beta":{"type":"piecewise","breaks":[0,3.141592653589793],"values":[2,4]}}"#;
        let cfg = DomainConfig::from_json(text).unwrap();
        let (dom, beta) = cfg.build().unwrap();
        assert_eq!(dom.hole_radius, 0.5);
        assert_eq!(beta.infimum(), 2.0);
        let again = DomainConfig::from_json(&cfg.to_json()).unwrap();
        assert_eq!(again, cfg);
        assert!(DomainConfig::from_json(
            r#"{"outline":{"type":"blob"},"hole_radius":1,"beta":{"type":"constant","value":1}}"#
        )
        .is_err());
    }
}
