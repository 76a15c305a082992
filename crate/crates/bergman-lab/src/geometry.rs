//! Bounded convex domains in C^n: containment, boundary distance, boundary
//! layers, compact exhaustions, and deterministic interior/boundary sampling.
//!
//! Three shapes are supported: the unit ball, polydiscs, and axis-aligned
//! ellipsoids. All of them contain the origin and are convex, so the Minkowski
//! gauge classifies points: gauge < 1 interior, gauge = 1 boundary.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::TAU;

use crate::error::{Error, Result};

/// Slack applied when testing membership in the closure, so that boundary
/// samples (exact up to roundoff) are accepted.
const CLOSURE_SLACK: f64 = 1e-9;

/// A point of C^n, n >= 1.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexPoint {
    coords: Vec<Complex64>,
}

impl ComplexPoint {
    pub fn new(coords: Vec<Complex64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidParameter("point must have n >= 1".into()));
        }
        if coords.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::InvalidParameter(
                "point coordinates must be finite".into(),
            ));
        }
        Ok(Self { coords })
    }

    /// Point with the given real parts and zero imaginary parts.
    pub fn from_re(re: &[f64]) -> Result<Self> {
        Self::new(re.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Complex64] {
        &self.coords
    }

    /// Euclidean norm of the point viewed in R^{2n}.
    pub fn norm(&self) -> f64 {
        self.coords.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub(crate) fn from_coords_unchecked(coords: Vec<Complex64>) -> Self {
        Self { coords }
    }

    pub(crate) fn coords_mut(&mut self) -> &mut [Complex64] {
        &mut self.coords
    }
}

/// A bounded convex domain in C^n containing the origin.
#[derive(Debug, Clone, PartialEq)]
pub enum Domain {
    /// Euclidean unit ball { |z_1|^2 + ... + |z_n|^2 < 1 }.
    UnitBall { dim: usize },
    /// Product of discs { |z_k| < r_k }.
    Polydisc { radii: Vec<f64> },
    /// Axis-aligned ellipsoid { sum |z_k / a_k|^2 < 1 }.
    Ellipsoid { semiaxes: Vec<f64> },
}

impl Domain {
    pub fn unit_ball(dim: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidParameter("domain dimension must be >= 2".into()));
        }
        Ok(Domain::UnitBall { dim })
    }

    pub fn polydisc(radii: Vec<f64>) -> Result<Self> {
        check_axes(&radii, "polydisc radii")?;
        Ok(Domain::Polydisc { radii })
    }

    pub fn ellipsoid(semiaxes: Vec<f64>) -> Result<Self> {
        check_axes(&semiaxes, "ellipsoid semiaxes")?;
        Ok(Domain::Ellipsoid { semiaxes })
    }

    pub fn dim(&self) -> usize {
        match self {
            Domain::UnitBall { dim } => *dim,
            Domain::Polydisc { radii } => radii.len(),
            Domain::Ellipsoid { semiaxes } => semiaxes.len(),
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Domain::UnitBall { .. } => "ball",
            Domain::Polydisc { .. } => "polydisc",
            Domain::Ellipsoid { .. } => "ellipsoid",
        }
    }

    /// Radius of the largest ball centered at the origin inside the domain.
    pub fn inradius(&self) -> f64 {
        match self {
            Domain::UnitBall { .. } => 1.0,
            Domain::Polydisc { radii } => radii.iter().cloned().fold(f64::INFINITY, f64::min),
            Domain::Ellipsoid { semiaxes } => {
                semiaxes.iter().cloned().fold(f64::INFINITY, f64::min)
            }
        }
    }

    /// Minkowski gauge of the domain: < 1 interior, = 1 boundary, > 1 outside.
    pub fn gauge(&self, z: &ComplexPoint) -> Result<f64> {
        self.check_dim(z)?;
        Ok(match self {
            Domain::UnitBall { .. } => z.norm(),
            Domain::Polydisc { radii } => z
                .coords()
                .iter()
                .zip(radii)
                .map(|(c, r)| c.norm() / r)
                .fold(0.0, f64::max),
            Domain::Ellipsoid { semiaxes } => z
                .coords()
                .iter()
                .zip(semiaxes)
                .map(|(c, a)| c.norm_sqr() / (a * a))
                .sum::<f64>()
                .sqrt(),
        })
    }

    /// True iff `z` lies in the open domain.
    pub fn contains(&self, z: &ComplexPoint) -> Result<bool> {
        Ok(self.gauge(z)? < 1.0)
    }

    pub fn in_closure(&self, z: &ComplexPoint) -> Result<bool> {
        Ok(self.gauge(z)? <= 1.0 + CLOSURE_SLACK)
    }

    /// Euclidean distance from a point of the closure to the boundary.
    ///
    /// Closed form for ball and polydisc; safeguarded Newton on the normal
    /// equation for the ellipsoid (tolerance 1e-10 or better).
    pub fn boundary_distance(&self, z: &ComplexPoint) -> Result<f64> {
        let gauge = self.gauge(z)?;
        if gauge > 1.0 + CLOSURE_SLACK {
            return Err(Error::OutsideDomain { gauge });
        }
        let d = match self {
            Domain::UnitBall { .. } => 1.0 - z.norm(),
            Domain::Polydisc { radii } => z
                .coords()
                .iter()
                .zip(radii)
                .map(|(c, r)| r - c.norm())
                .fold(f64::INFINITY, f64::min),
            Domain::Ellipsoid { semiaxes } => {
                let axes = realify(semiaxes);
                let x = flatten(z);
                ellipsoid_boundary_distance(&axes, &x)
            }
        };
        Ok(d.max(0.0))
    }

    fn check_dim(&self, z: &ComplexPoint) -> Result<()> {
        if z.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: z.dim(),
            });
        }
        Ok(())
    }
}

fn check_axes(axes: &[f64], what: &str) -> Result<()> {
    if axes.len() < 2 {
        return Err(Error::InvalidParameter(format!("{what}: need n >= 2")));
    }
    if axes.iter().any(|r| !r.is_finite() || *r <= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "{what}: all entries must be positive and finite"
        )));
    }
    Ok(())
}

/// Duplicate each complex semiaxis into the two real axes it governs.
fn realify(semiaxes: &[f64]) -> Vec<f64> {
    semiaxes.iter().flat_map(|&a| [a, a]).collect()
}

fn flatten(z: &ComplexPoint) -> Vec<f64> {
    z.coords().iter().flat_map(|c| [c.re, c.im]).collect()
}

/// Distance from `x` (inside the closure) to the real ellipsoid
/// { sum (y_i/A_i)^2 = 1 }.
///
/// The nearest point satisfies y_i = A_i^2 x_i / (A_i^2 + lambda) for a
/// multiplier lambda in (-min A_i^2, 0]; lambda is located with a
/// bisection-safeguarded Newton iteration on g(lambda) = sum (A_i x_i /
/// (A_i^2 + lambda))^2 - 1. When x has no component along the shortest axes
/// the multiplier degenerates to -min A_i^2 and the nearest point gains a
/// free component there.
fn ellipsoid_boundary_distance(axes: &[f64], x: &[f64]) -> f64 {
    let a_min_sq = axes.iter().map(|a| a * a).fold(f64::INFINITY, f64::min);
    let norm_sq: f64 = x.iter().map(|v| v * v).sum();
    if norm_sq == 0.0 {
        return a_min_sq.sqrt();
    }

    let g = |lambda: f64| -> f64 {
        x.iter()
            .zip(axes)
            .map(|(xi, a)| {
                let t = a * xi / (a * a + lambda);
                t * t
            })
            .sum::<f64>()
            - 1.0
    };

    // Mass on the shortest axes decides which branch applies.
    let short_mass: f64 = x
        .iter()
        .zip(axes)
        .filter(|&(_, a)| a * a == a_min_sq)
        .map(|(xi, _)| xi * xi)
        .sum();
    if short_mass == 0.0 {
        // g stays finite as lambda -> -a_min_sq; check whether the constraint
        // can be met on the long axes alone.
        let g_lim = x
            .iter()
            .zip(axes)
            .filter(|&(_, a)| a * a != a_min_sq)
            .map(|(xi, a)| {
                let t = a * xi / (a * a - a_min_sq);
                t * t
            })
            .sum::<f64>();
        if g_lim <= 1.0 {
            let mut dist_sq = a_min_sq * (1.0 - g_lim);
            for (xi, a) in x.iter().zip(axes) {
                if a * a != a_min_sq {
                    let yi = a * a * xi / (a * a - a_min_sq);
                    dist_sq += (yi - xi) * (yi - xi);
                }
            }
            return dist_sq.sqrt();
        }
    }

    // Bracket the root. g is decreasing; g(0) = gauge^2 - 1 <= 0 for closure
    // points (up to roundoff slack, handled by expanding hi).
    let mut lo = -a_min_sq;
    let mut hi = 0.0;
    if g(hi) > 0.0 {
        let mut step = a_min_sq * 1e-12;
        while g(hi) > 0.0 {
            hi += step;
            step *= 4.0;
        }
    }

    let mut lambda = 0.5 * (lo + hi);
    for _ in 0..200 {
        let gl = g(lambda);
        if gl > 0.0 {
            lo = lambda;
        } else {
            hi = lambda;
        }
        // Newton step on g; fall back to bisection when it leaves the bracket.
        let dg: f64 = x
            .iter()
            .zip(axes)
            .map(|(xi, a)| {
                let d = a * a + lambda;
                -2.0 * a * a * xi * xi / (d * d * d)
            })
            .sum();
        let mut next = if dg != 0.0 { lambda - gl / dg } else { lambda };
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if (next - lambda).abs() <= 1e-16 * (1.0 + lambda.abs()) {
            lambda = next;
            break;
        }
        lambda = next;
    }

    let mut dist_sq = 0.0;
    for (xi, a) in x.iter().zip(axes) {
        let yi = a * a * xi / (a * a + lambda);
        dist_sq += (yi - xi) * (yi - xi);
    }
    dist_sq.sqrt()
}

/// The boundary layer U_delta = { z in Omega : dist(z, bOmega) < delta }.
#[derive(Debug, Clone)]
pub struct BoundaryLayer {
    parent: Domain,
    delta: f64,
}

impl BoundaryLayer {
    pub fn new(parent: Domain, delta: f64) -> Result<Self> {
        if !(delta > 0.0 && delta < parent.inradius()) {
            return Err(Error::InvalidParameter(format!(
                "layer width delta = {delta} must lie in (0, inradius = {})",
                parent.inradius()
            )));
        }
        Ok(Self { parent, delta })
    }

    pub fn parent(&self) -> &Domain {
        &self.parent
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// True iff the interior point `z` lies within `delta` of the boundary.
    pub fn contains(&self, z: &ComplexPoint) -> Result<bool> {
        let gauge = self.parent.gauge(z)?;
        if gauge >= 1.0 {
            return Err(Error::NotInterior { gauge });
        }
        Ok(self.parent.boundary_distance(z)? < self.delta)
    }
}

/// Membership in the compact exhaustion K_eps = { dist(z, bOmega) >= eps }.
///
/// For interior points this is the complement of the boundary layer of the
/// same width.
pub fn compact_exhaustion_predicate(domain: &Domain, eps: f64, z: &ComplexPoint) -> Result<bool> {
    if !(eps > 0.0 && eps < domain.inradius()) {
        return Err(Error::InvalidParameter(format!(
            "eps = {eps} must lie in (0, inradius = {})",
            domain.inradius()
        )));
    }
    Ok(domain.boundary_distance(z)? >= eps)
}

/// `m` deterministic samples of the open domain, uniform for Lebesgue volume.
pub fn sample_interior(domain: &Domain, m: usize, seed: u64) -> Vec<ComplexPoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut buf = vec![Complex64::new(0.0, 0.0); domain.dim()];
    (0..m)
        .map(|_| {
            fill_interior(domain, &mut rng, (0.0, 1.0), &mut buf);
            ComplexPoint::from_coords_unchecked(buf.clone())
        })
        .collect()
}

/// `m` deterministic boundary samples with full boundary coverage (not
/// uniform for surface measure).
pub fn sample_boundary(domain: &Domain, m: usize, seed: u64) -> Vec<ComplexPoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut buf = vec![Complex64::new(0.0, 0.0); domain.dim()];
    (0..m)
        .map(|_| {
            fill_boundary(domain, &mut rng, &mut buf);
            ComplexPoint::from_coords_unchecked(buf.clone())
        })
        .collect()
}

/// Write one uniform interior sample into `buf`.
///
/// `u_range` restricts the quantile of the first coordinate's radial law to a
/// sub-interval; (0, 1) yields the unrestricted distribution. This is the
/// hook used for stratified quadrature: the quantile is exactly uniform on
/// (0, 1), so equal quantile strata carry equal probability.
pub(crate) fn fill_interior(
    domain: &Domain,
    rng: &mut ChaCha8Rng,
    u_range: (f64, f64),
    buf: &mut [Complex64],
) {
    match domain {
        Domain::UnitBall { .. } => fill_ball(rng, 1.0, u_range, buf),
        Domain::Ellipsoid { semiaxes } => {
            fill_ball(rng, 1.0, u_range, buf);
            for (c, a) in buf.iter_mut().zip(semiaxes) {
                *c *= *a;
            }
        }
        Domain::Polydisc { radii } => {
            for (k, (c, r)) in buf.iter_mut().zip(radii).enumerate() {
                let u = if k == 0 {
                    stratified_unit(rng, u_range)
                } else {
                    rng.gen::<f64>()
                };
                let theta = TAU * rng.gen::<f64>();
                let rho = r * u.sqrt();
                *c = Complex64::from_polar(rho, theta);
            }
        }
    }
}

fn stratified_unit(rng: &mut ChaCha8Rng, (lo, hi): (f64, f64)) -> f64 {
    lo + (hi - lo) * rng.gen::<f64>()
}

/// Uniform sample of the complex ball of the given radius, written into `buf`.
///
/// The radial quantile of the first coordinate is drawn from `u_range`; the
/// remaining coordinates fill the fiber ball recursively. The marginal of
/// |z_1| on the radius-rho ball in C^n has CDF 1 - (1 - (t/rho)^2)^n, which
/// inverts in closed form.
fn fill_ball(rng: &mut ChaCha8Rng, radius: f64, u_range: (f64, f64), buf: &mut [Complex64]) {
    let n = buf.len();
    let u = stratified_unit(rng, u_range);
    if n == 1 {
        let theta = TAU * rng.gen::<f64>();
        buf[0] = Complex64::from_polar(radius * u.sqrt(), theta);
        return;
    }
    let t = radius * (1.0 - (1.0 - u).powf(1.0 / n as f64)).sqrt();
    let theta = TAU * rng.gen::<f64>();
    buf[0] = Complex64::from_polar(t, theta);
    let fiber = (radius * radius - t * t).max(0.0).sqrt();
    fill_ball(rng, fiber, (0.0, 1.0), &mut buf[1..]);
}

/// Write one boundary sample into `buf`.
pub(crate) fn fill_boundary(domain: &Domain, rng: &mut ChaCha8Rng, buf: &mut [Complex64]) {
    match domain {
        Domain::UnitBall { .. } => fill_sphere(rng, buf),
        Domain::Ellipsoid { semiaxes } => {
            fill_sphere(rng, buf);
            for (c, a) in buf.iter_mut().zip(semiaxes) {
                *c *= *a;
            }
        }
        Domain::Polydisc { radii } => {
            let face = rng.gen_range(0..radii.len());
            for (k, (c, r)) in buf.iter_mut().zip(radii).enumerate() {
                let theta = TAU * rng.gen::<f64>();
                let rho = if k == face {
                    *r
                } else {
                    r * rng.gen::<f64>().sqrt()
                };
                *c = Complex64::from_polar(rho, theta);
            }
        }
    }
}

/// Normalized Gaussian direction: uniform on the unit sphere of R^{2n}.
fn fill_sphere(rng: &mut ChaCha8Rng, buf: &mut [Complex64]) {
    loop {
        for c in buf.iter_mut() {
            let (g1, g2) = gaussian_pair(rng);
            *c = Complex64::new(g1, g2);
        }
        let norm = buf.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-9 {
            for c in buf.iter_mut() {
                *c /= norm;
            }
            return;
        }
    }
}

/// Box-Muller transform; two draws per call keeps the stream length fixed.
fn gaussian_pair(rng: &mut ChaCha8Rng) -> (f64, f64) {
    let u1: f64 = 1.0 - rng.gen::<f64>(); // in (0, 1], log-safe
    let u2: f64 = rng.gen();
    let r = (-2.0 * u1.ln()).sqrt();
    (r * (TAU * u2).cos(), r * (TAU * u2).sin())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn pt(coords: &[(f64, f64)]) -> ComplexPoint {
        ComplexPoint::new(coords.iter().map(|&(r, i)| Complex64::new(r, i)).collect()).unwrap()
    }

    #[test]
    fn contains_examples() {
        let ball = Domain::unit_ball(2).unwrap();
        assert!(ball.contains(&pt(&[(0.0, 0.0), (0.0, 0.0)])).unwrap());
        assert!(!ball.contains(&pt(&[(1.0, 0.0), (0.0, 0.0)])).unwrap());

        // |0.6/0.5|^2 = 1.44 > 1, so outside.
        let ell = Domain::ellipsoid(vec![1.0, 0.5]).unwrap();
        assert!(!ell.contains(&pt(&[(0.0, 0.0), (0.6, 0.0)])).unwrap());
        assert!(ell.contains(&pt(&[(0.0, 0.0), (0.4, 0.0)])).unwrap());
    }

    #[test]
    fn contains_dim_mismatch() {
        let ball = Domain::unit_ball(2).unwrap();
        let p3 = pt(&[(0.0, 0.0), (0.0, 0.0), (0.0, 0.0)]);
        assert!(matches!(
            ball.contains(&p3),
            Err(Error::DimensionMismatch { expected: 2, got: 3 })
        ));
    }

    #[test]
    fn boundary_distance_closed_forms() {
        let ball = Domain::unit_ball(2).unwrap();
        assert_eq!(ball.boundary_distance(&pt(&[(0.0, 0.0), (0.0, 0.0)])).unwrap(), 1.0);
        assert_abs_diff_eq!(
            ball.boundary_distance(&pt(&[(0.6, 0.0), (0.0, 0.0)])).unwrap(),
            0.4,
            epsilon = 1e-15
        );

        let pd = Domain::polydisc(vec![1.0, 2.0]).unwrap();
        assert_abs_diff_eq!(
            pd.boundary_distance(&pt(&[(0.5, 0.0), (0.0, 1.0)])).unwrap(),
            0.5,
            epsilon = 1e-15
        );

        let outside = pt(&[(2.0, 0.0), (0.0, 0.0)]);
        assert!(matches!(
            ball.boundary_distance(&outside),
            Err(Error::OutsideDomain { .. })
        ));
    }

    /// Brute-force oracle: minimize ||z - w|| over a dense parametric grid of
    /// the boundary (w_1, w_2) = (a_1 cos(psi) e^{i phi_1}, a_2 sin(psi)
    /// e^{i phi_2}), refined once around the coarse minimizer.
    fn brute_force_ellipsoid_distance(a: &[f64; 2], z: &ComplexPoint) -> f64 {
        let dist_at = |psi: f64, p1: f64, p2: f64| -> f64 {
            let w1 = Complex64::from_polar(a[0] * psi.cos(), p1);
            let w2 = Complex64::from_polar(a[1] * psi.sin(), p2);
            ((w1 - z.coords()[0]).norm_sqr() + (w2 - z.coords()[1]).norm_sqr()).sqrt()
        };
        let mut best = (f64::INFINITY, 0.0, 0.0, 0.0);
        let (np, na) = (160, 240);
        for i in 0..=np {
            let psi = std::f64::consts::FRAC_PI_2 * i as f64 / np as f64;
            for j in 0..na {
                let p1 = TAU * j as f64 / na as f64;
                for k in 0..na {
                    let p2 = TAU * k as f64 / na as f64;
                    let d = dist_at(psi, p1, p2);
                    if d < best.0 {
                        best = (d, psi, p1, p2);
                    }
                }
            }
        }
        let (mut dmin, cpsi, cp1, cp2) = best;
        let hp = std::f64::consts::FRAC_PI_2 / np as f64;
        let ha = TAU / na as f64;
        let refine = 40;
        for i in -refine..=refine {
            let psi = cpsi + 2.0 * hp * i as f64 / refine as f64;
            for j in -refine..=refine {
                let p1 = cp1 + 2.0 * ha * j as f64 / refine as f64;
                for k in -refine..=refine {
                    let p2 = cp2 + 2.0 * ha * k as f64 / refine as f64;
                    dmin = dmin.min(dist_at(psi, p1, p2));
                }
            }
        }
        dmin
    }

    #[test]
    fn ellipsoid_distance_matches_brute_force() {
        let ell = Domain::ellipsoid(vec![1.0, 0.5]).unwrap();
        let probes = [
            pt(&[(0.0, 0.0), (0.25, 0.0)]),
            pt(&[(0.3, 0.2), (0.1, -0.15)]),
            pt(&[(0.0, 0.0), (0.0, 0.0)]),
            pt(&[(0.9, 0.0), (0.0, 0.0)]),
            pt(&[(0.2, 0.0), (0.0, 0.0)]), // nearest point off the long axis
        ];
        for z in &probes {
            let d = ell.boundary_distance(z).unwrap();
            let brute = brute_force_ellipsoid_distance(&[1.0, 0.5], z);
            assert!(
                (d - brute).abs() < 1e-4,
                "solver {d} vs brute force {brute} at {z:?}"
            );
        }
    }

    #[test]
    fn ellipsoid_boundary_distance_zero_on_boundary() {
        let ell = Domain::ellipsoid(vec![1.0, 0.5]).unwrap();
        for z in sample_boundary(&ell, 200, 9) {
            assert!(ell.boundary_distance(&z).unwrap() < 1e-10);
        }
    }

    #[test]
    fn interior_samples_are_inside_and_deterministic() {
        for dom in [
            Domain::unit_ball(2).unwrap(),
            Domain::polydisc(vec![1.0, 1.0]).unwrap(),
            Domain::ellipsoid(vec![1.0, 0.5]).unwrap(),
        ] {
            let a = sample_interior(&dom, 100, 7);
            assert_eq!(a.len(), 100);
            for z in &a {
                assert!(dom.contains(z).unwrap(), "{z:?} escaped {dom:?}");
            }
            let b = sample_interior(&dom, 100, 7);
            assert_eq!(a, b, "samples must be bit-identical for equal seeds");
            let c = sample_interior(&dom, 100, 8);
            assert_ne!(a, c);
        }
    }

    #[test]
    fn interior_sample_mean_is_centered() {
        let ball = Domain::unit_ball(2).unwrap();
        let m = 1_000_000;
        let pts = sample_interior(&ball, m, 3);
        // Var of each real coordinate on the R^4 unit ball is 1/(4+2).
        let se = (1.0f64 / 6.0).sqrt() / (m as f64).sqrt();
        for k in 0..2 {
            let mean_re: f64 = pts.iter().map(|z| z.coords()[k].re).sum::<f64>() / m as f64;
            let mean_im: f64 = pts.iter().map(|z| z.coords()[k].im).sum::<f64>() / m as f64;
            assert!(mean_re.abs() < 3.0 * se, "coord {k} re mean {mean_re}");
            assert!(mean_im.abs() < 3.0 * se, "coord {k} im mean {mean_im}");
        }
    }

    #[test]
    fn boundary_samples_sit_on_the_boundary() {
        let ball = Domain::unit_ball(2).unwrap();
        for z in sample_boundary(&ball, 50, 11) {
            assert!((z.norm() - 1.0).abs() < 1e-12);
        }
        let pd = Domain::polydisc(vec![1.0, 1.0]).unwrap();
        for z in sample_boundary(&pd, 50, 11) {
            let gauge = pd.gauge(&z).unwrap();
            assert!((gauge - 1.0).abs() < 1e-12);
        }
        let ell = Domain::ellipsoid(vec![1.0, 0.5]).unwrap();
        for z in sample_boundary(&ell, 50, 11) {
            let defect: f64 = z.coords()[0].norm_sqr() + z.coords()[1].norm_sqr() / 0.25;
            assert!((defect - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn boundary_distance_small_on_all_kinds() {
        for dom in [
            Domain::unit_ball(3).unwrap(),
            Domain::polydisc(vec![1.0, 0.5, 2.0]).unwrap(),
            Domain::ellipsoid(vec![1.0, 0.5]).unwrap(),
        ] {
            for z in sample_boundary(&dom, 300, 21) {
                assert!(dom.boundary_distance(&z).unwrap() < 1e-10);
            }
        }
    }

    #[test]
    fn layer_predicate_examples() {
        let ball = Domain::unit_ball(2).unwrap();
        let layer = BoundaryLayer::new(ball.clone(), 0.2).unwrap();
        assert!(layer.contains(&pt(&[(0.9, 0.0), (0.0, 0.0)])).unwrap());
        assert!(!layer.contains(&pt(&[(0.0, 0.0), (0.0, 0.0)])).unwrap());
        // Distance exactly delta is excluded (strict inequality). 0.75 and
        // 0.25 are dyadic, so 1 - 0.75 == 0.25 holds exactly in binary.
        let strict = BoundaryLayer::new(ball.clone(), 0.25).unwrap();
        assert!(!strict.contains(&pt(&[(0.75, 0.0), (0.0, 0.0)])).unwrap());

        let boundary_pt = pt(&[(1.0, 0.0), (0.0, 0.0)]);
        assert!(matches!(layer.contains(&boundary_pt), Err(Error::NotInterior { .. })));
    }

    #[test]
    fn layer_width_validation() {
        let ball = Domain::unit_ball(2).unwrap();
        assert!(BoundaryLayer::new(ball.clone(), 0.0).is_err());
        assert!(BoundaryLayer::new(ball.clone(), 1.0).is_err());
        assert!(BoundaryLayer::new(ball, 0.5).is_ok());
    }

    #[test]
    fn exhaustion_examples() {
        let ball = Domain::unit_ball(2).unwrap();
        assert!(compact_exhaustion_predicate(&ball, 0.2, &pt(&[(0.0, 0.0), (0.0, 0.0)])).unwrap());
        assert!(!compact_exhaustion_predicate(&ball, 0.2, &pt(&[(0.9, 0.0), (0.0, 0.0)])).unwrap());
        assert!(compact_exhaustion_predicate(&ball, 1.5, &pt(&[(0.0, 0.0), (0.0, 0.0)])).is_err());
    }

    #[test]
    fn layer_and_exhaustion_partition_the_domain() {
        for dom in [
            Domain::unit_ball(2).unwrap(),
            Domain::polydisc(vec![1.0, 1.0]).unwrap(),
            Domain::ellipsoid(vec![1.0, 0.5]).unwrap(),
        ] {
            let delta = 0.2;
            let layer = BoundaryLayer::new(dom.clone(), delta).unwrap();
            for z in sample_interior(&dom, 2_000, 5) {
                let in_layer = layer.contains(&z).unwrap();
                let in_core = compact_exhaustion_predicate(&dom, delta, &z).unwrap();
                assert!(in_layer ^ in_core, "partition violated at {z:?}");
            }
        }
    }

    #[test]
    fn contains_is_monotone_under_scaling() {
        for dom in [
            Domain::unit_ball(2).unwrap(),
            Domain::polydisc(vec![1.0, 1.0]).unwrap(),
            Domain::ellipsoid(vec![1.0, 0.5]).unwrap(),
        ] {
            for (i, z) in sample_interior(&dom, 500, 13).iter().enumerate() {
                let t = 0.1 + 0.8 * ((i % 9) as f64) / 9.0;
                let scaled = ComplexPoint::new(z.coords().iter().map(|c| c * t).collect()).unwrap();
                assert!(dom.contains(&scaled).unwrap());
            }
        }
    }
}
