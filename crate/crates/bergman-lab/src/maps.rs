//! Polynomial holomorphic self-maps of a domain: evaluation, complex
//! Jacobian determinants, boundary scans, self-map and compact-range
//! verification, and conjugation by invertible linear maps.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{self, ComplexPoint, Domain};
use crate::polyalg::{MultiIndex, MultiPoly};

/// Gauge slack below which a map still counts as a self-map; covers roundoff
/// in unitary coefficients and boundary samples.
pub const SELF_MAP_TOL: f64 = 1e-9;

/// Margin above which the range is declared compactly contained.
pub const COMPACT_RANGE_TOL: f64 = 1e-6;

/// An n-tuple of polynomial components phi = (phi_1, ..., phi_n).
#[derive(Debug, Clone, PartialEq)]
pub struct HolomorphicMap {
    components: Vec<MultiPoly>,
}

impl HolomorphicMap {
    pub fn new(components: Vec<MultiPoly>) -> Result<Self> {
        let n = components.len();
        if n == 0 {
            return Err(Error::InvalidParameter("map needs at least one component".into()));
        }
        for c in &components {
            if c.dim() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: c.dim(),
                });
            }
        }
        Ok(Self { components })
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[MultiPoly] {
        &self.components
    }

    pub fn identity(n: usize) -> Self {
        Self {
            components: (0..n).map(|k| MultiPoly::variable(n, k).unwrap()).collect(),
        }
    }

    /// Projection onto the first coordinate: (z_1, 0, ..., 0).
    pub fn projection(n: usize) -> Self {
        let mut components = vec![MultiPoly::zero(n); n];
        components[0] = MultiPoly::variable(n, 0).unwrap();
        Self { components }
    }

    /// Scaling z -> c z.
    pub fn scaling(n: usize, c: f64) -> Self {
        Self {
            components: (0..n)
                .map(|k| MultiPoly::variable(n, k).unwrap().scale(Complex64::new(c, 0.0)))
                .collect(),
        }
    }

    /// The rotation (a z1 + b z2, -conj(b) z1 + conj(a) z2) of C^2;
    /// requires |a|^2 + |b|^2 = 1.
    pub fn unitary(a: Complex64, b: Complex64) -> Result<Self> {
        if (a.norm_sqr() + b.norm_sqr() - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "unitary coefficients must satisfy |a|^2 + |b|^2 = 1, got {}",
                a.norm_sqr() + b.norm_sqr()
            )));
        }
        let z1 = MultiPoly::variable(2, 0).unwrap();
        let z2 = MultiPoly::variable(2, 1).unwrap();
        Ok(Self {
            components: vec![
                z1.scale(a).add(&z2.scale(b)).unwrap(),
                z1.scale(-b.conj()).add(&z2.scale(a.conj())).unwrap(),
            ],
        })
    }

    /// Coordinate swap (z_2, z_1) of C^2.
    pub fn swap() -> Self {
        Self {
            components: vec![
                MultiPoly::variable(2, 1).unwrap(),
                MultiPoly::variable(2, 0).unwrap(),
            ],
        }
    }

    /// Diagonal linear map z_k -> d_k z_k.
    pub fn diagonal(entries: &[Complex64]) -> Result<Self> {
        let n = entries.len();
        let components = (0..n)
            .map(|k| MultiPoly::variable(n, k).map(|v| v.scale(entries[k])))
            .collect::<Result<_>>()?;
        Self::new(components)
    }

    pub fn evaluate(&self, z: &ComplexPoint) -> Result<ComplexPoint> {
        let coords = self
            .components
            .iter()
            .map(|c| c.evaluate(z))
            .collect::<Result<Vec<_>>>()?;
        Ok(ComplexPoint::new(coords)?)
    }

    /// The n x n matrix of formal partials d phi_i / d z_k.
    pub fn jacobian_polys(&self) -> Result<Vec<Vec<MultiPoly>>> {
        let n = self.dim();
        self.components
            .iter()
            .map(|c| (0..n).map(|k| c.partial_derivative(k)).collect())
            .collect()
    }

    /// Largest total degree among the components.
    pub fn degree(&self) -> i64 {
        self.components.iter().map(|c| c.degree()).max().unwrap_or(-1)
    }

    /// True when every component is homogeneous linear.
    pub fn is_linear(&self) -> bool {
        self.components.iter().all(|c| {
            c.terms()
                .all(|(alpha, _)| alpha.total_degree() == 1)
        })
    }

    /// Coefficient matrix of a linear map: entry (i, k) multiplies z_k in
    /// component i.
    pub fn linear_matrix(&self) -> Result<Vec<Vec<Complex64>>> {
        if !self.is_linear() {
            return Err(Error::SingularLinearMap(
                "map has non-linear or constant terms".into(),
            ));
        }
        let n = self.dim();
        Ok((0..n)
            .map(|i| {
                (0..n)
                    .map(|k| self.components[i].coefficient(&MultiIndex::unit(n, k)))
                    .collect()
            })
            .collect())
    }
}

/// Determinant of the complex Jacobian of `map` at `z`.
pub fn jacobian_det(map: &HolomorphicMap, z: &ComplexPoint) -> Result<Complex64> {
    let polys = map.jacobian_polys()?;
    jacobian_det_with(&polys, z)
}

fn jacobian_det_with(polys: &[Vec<MultiPoly>], z: &ComplexPoint) -> Result<Complex64> {
    let n = polys.len();
    let mut entries = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    for (i, row) in polys.iter().enumerate() {
        for (k, p) in row.iter().enumerate() {
            entries[i][k] = p.evaluate(z)?;
        }
    }
    Ok(det(&entries))
}

/// Determinant by Laplace expansion; fine for the small n used here.
fn det(m: &[Vec<Complex64>]) -> Complex64 {
    let n = m.len();
    match n {
        1 => m[0][0],
        2 => m[0][0] * m[1][1] - m[0][1] * m[1][0],
        3 => {
            m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
                - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
        }
        _ => {
            let mut acc = Complex64::new(0.0, 0.0);
            let mut sign = 1.0;
            for k in 0..n {
                let minor: Vec<Vec<Complex64>> = m[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter_map(|(j, v)| (j != k).then_some(*v))
                            .collect()
                    })
                    .collect();
                acc += sign * m[0][k] * det(&minor);
                sign = -sign;
            }
            acc
        }
    }
}

/// Min/max statistics of |J(phi)| over a boundary sample.
#[derive(Debug, Clone)]
pub struct JacobianReport {
    pub min_abs: f64,
    pub max_abs: f64,
    pub argmin_point: ComplexPoint,
    pub samples: usize,
}

pub fn boundary_jacobian_scan(
    map: &HolomorphicMap,
    domain: &Domain,
    m: usize,
    seed: u64,
) -> Result<JacobianReport> {
    check_map_domain(map, domain)?;
    let points = geometry::sample_boundary(domain, m.max(1), seed);
    let polys = map.jacobian_polys()?;
    let abs: Vec<f64> = points
        .par_iter()
        .map(|p| jacobian_det_with(&polys, p).map(|j| j.norm()))
        .collect::<Result<_>>()?;
    let mut min_abs = f64::INFINITY;
    let mut max_abs = 0.0f64;
    let mut argmin = 0usize;
    for (i, &a) in abs.iter().enumerate() {
        if a < min_abs {
            min_abs = a;
            argmin = i;
        }
        max_abs = max_abs.max(a);
    }
    Ok(JacobianReport {
        min_abs,
        max_abs,
        argmin_point: points[argmin].clone(),
        samples: points.len(),
    })
}

/// Check phi(Omega) lies in the closure, by scanning boundary samples.
///
/// The domain gauges are convex, so gauge(phi) is plurisubharmonic and its
/// sup over the closure is attained on the boundary; scanning bOmega is
/// enough up to sampling density. Returns the verdict and the worst value of
/// gauge(phi(z)) - 1 observed.
pub fn is_self_map(
    map: &HolomorphicMap,
    domain: &Domain,
    m: usize,
    seed: u64,
) -> Result<(bool, f64)> {
    check_map_domain(map, domain)?;
    let points = geometry::sample_boundary(domain, m.max(1), seed);
    let mut worst = f64::NEG_INFINITY;
    for p in &points {
        let image = map.evaluate(p)?;
        worst = worst.max(domain.gauge(&image)? - 1.0);
    }
    Ok((worst <= SELF_MAP_TOL, worst))
}

/// Margin of compact containment: min over boundary samples of
/// dist(phi(z), bOmega). True iff the margin exceeds 1e-6.
pub fn range_compactly_contained(
    map: &HolomorphicMap,
    domain: &Domain,
    m: usize,
    seed: u64,
) -> Result<(bool, f64)> {
    let (ok, worst) = is_self_map(map, domain, m, seed)?;
    if !ok {
        return Err(Error::NotSelfMap {
            worst_violation: worst,
        });
    }
    let points = geometry::sample_boundary(domain, m.max(1), seed);
    let mut margin = f64::INFINITY;
    for p in &points {
        let image = map.evaluate(p)?;
        margin = margin.min(domain.boundary_distance(&image)?);
    }
    Ok((margin > COMPACT_RANGE_TOL, margin))
}

/// Boundary samples p with dist(phi(p), bOmega) < tol: an inner
/// approximation of phi^{-1}(bOmega) intersected with bOmega.
pub fn boundary_preimage_samples(
    map: &HolomorphicMap,
    domain: &Domain,
    m: usize,
    tol: f64,
    seed: u64,
) -> Result<Vec<ComplexPoint>> {
    let (ok, worst) = is_self_map(map, domain, m.min(2000).max(1), seed)?;
    if !ok {
        return Err(Error::NotSelfMap {
            worst_violation: worst,
        });
    }
    let points = geometry::sample_boundary(domain, m.max(1), seed);
    let mut hits = Vec::new();
    for p in points {
        let image = map.evaluate(&p)?;
        if domain.boundary_distance(&image)? < tol {
            hits.push(p);
        }
    }
    Ok(hits)
}

/// Exact conjugation B^{-1} o phi o B for an invertible linear map B.
pub fn conjugate(map: &HolomorphicMap, b: &HolomorphicMap) -> Result<HolomorphicMap> {
    if b.dim() != map.dim() {
        return Err(Error::DimensionMismatch {
            expected: map.dim(),
            got: b.dim(),
        });
    }
    let matrix = b.linear_matrix()?;
    let inv = invert_linear(&matrix)?;
    // phi o B, componentwise.
    let phi_b: Vec<MultiPoly> = map
        .components
        .iter()
        .map(|c| c.compose(b.components()))
        .collect::<Result<_>>()?;
    // Rows of B^{-1} recombine the composed components.
    let n = map.dim();
    let components = (0..n)
        .map(|i| {
            let mut acc = MultiPoly::zero(n);
            for (k, p) in phi_b.iter().enumerate() {
                acc = acc.add(&p.scale(inv[i][k]))?;
            }
            Ok(acc)
        })
        .collect::<Result<Vec<_>>>()?;
    HolomorphicMap::new(components)
}

/// Gauss-Jordan inverse with partial pivoting.
pub(crate) fn invert_linear(m: &[Vec<Complex64>]) -> Result<Vec<Vec<Complex64>>> {
    let n = m.len();
    let mut a: Vec<Vec<Complex64>> = m.to_vec();
    let mut inv: Vec<Vec<Complex64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| Complex64::new(if i == j { 1.0 } else { 0.0 }, 0.0))
                .collect()
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| a[i][col].norm().total_cmp(&a[j][col].norm()))
            .unwrap();
        if a[pivot][col].norm() < 1e-12 {
            return Err(Error::SingularLinearMap(format!(
                "pivot {:.3e} in column {col}",
                a[pivot][col].norm()
            )));
        }
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let d = a[col][col];
        for j in 0..n {
            a[col][j] /= d;
            inv[col][j] /= d;
        }
        for i in 0..n {
            if i != col {
                let factor = a[i][col];
                for j in 0..n {
                    let acj = a[col][j];
                    let icj = inv[col][j];
                    a[i][j] -= factor * acj;
                    inv[i][j] -= factor * icj;
                }
            }
        }
    }
    Ok(inv)
}

fn check_map_domain(map: &HolomorphicMap, domain: &Domain) -> Result<()> {
    if map.dim() != domain.dim() {
        return Err(Error::DimensionMismatch {
            expected: domain.dim(),
            got: map.dim(),
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::Rng;
    use rand_chacha::rand_core::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn cpt(coords: &[(f64, f64)]) -> ComplexPoint {
        ComplexPoint::new(coords.iter().map(|&(r, i)| Complex64::new(r, i)).collect()).unwrap()
    }

    fn rand_map(rng: &mut ChaCha8Rng, deg: u32) -> HolomorphicMap {
        let mut comp = || {
            let mut p = MultiPoly::zero(2);
            for e1 in 0..=deg {
                for e2 in 0..=(deg - e1) {
                    p = p
                        .add(&MultiPoly::monomial(
                            MultiIndex::new(vec![e1, e2]),
                            Complex64::new(rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5)),
                        ))
                        .unwrap();
                }
            }
            p
        };
        HolomorphicMap::new(vec![comp(), comp()]).unwrap()
    }

    #[test]
    fn jacobian_examples() {
        let id = HolomorphicMap::identity(2);
        let z = cpt(&[(0.3, 0.1), (-0.2, 0.4)]);
        assert_eq!(jacobian_det(&id, &z).unwrap(), Complex64::new(1.0, 0.0));

        let proj = HolomorphicMap::projection(2);
        assert_eq!(jacobian_det(&proj, &z).unwrap(), Complex64::new(0.0, 0.0));

        // (z1, z2^2) has J = 2 z2; at (0, 3) this is 6.
        let sq = HolomorphicMap::new(vec![
            MultiPoly::variable(2, 0).unwrap(),
            MultiPoly::variable(2, 1).unwrap().pow(2),
        ])
        .unwrap();
        let v = jacobian_det(&sq, &cpt(&[(0.0, 0.0), (3.0, 0.0)])).unwrap();
        assert_abs_diff_eq!(v.re, 6.0, epsilon = 1e-14);
        assert_abs_diff_eq!(v.im, 0.0, epsilon = 1e-14);
    }

    /// Central finite differences along the real direction of each variable
    /// recover the complex partials of a holomorphic map.
    fn fd_jacobian_det(map: &HolomorphicMap, z: &ComplexPoint, h: f64) -> Complex64 {
        let n = map.dim();
        let mut entries = vec![vec![Complex64::new(0.0, 0.0); n]; n];
        for k in 0..n {
            let mut zp = z.coords().to_vec();
            let mut zm = z.coords().to_vec();
            zp[k] += h;
            zm[k] -= h;
            let fp = map
                .evaluate(&ComplexPoint::new(zp).unwrap())
                .unwrap();
            let fm = map
                .evaluate(&ComplexPoint::new(zm).unwrap())
                .unwrap();
            for i in 0..n {
                entries[i][k] = (fp.coords()[i] - fm.coords()[i]) / (2.0 * h);
            }
        }
        det(&entries)
    }

    #[test]
    fn jacobian_matches_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..20 {
            let map = rand_map(&mut rng, 3);
            let z = cpt(&[
                (rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5)),
                (rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5)),
            ]);
            let exact = jacobian_det(&map, &z).unwrap();
            let fd = fd_jacobian_det(&map, &z, 1e-5);
            assert!(
                (exact - fd).norm() <= 1e-6 * (1.0 + exact.norm()),
                "{exact} vs {fd}"
            );
        }
    }

    #[test]
    fn chain_rule_holds() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let phi = rand_map(&mut rng, 2);
            let psi = rand_map(&mut rng, 2);
            let composed = HolomorphicMap::new(
                phi.components()
                    .iter()
                    .map(|c| c.compose(psi.components()).unwrap())
                    .collect(),
            )
            .unwrap();
            for _ in 0..5 {
                let z = cpt(&[
                    (rng.gen_range(-0.4..0.4), rng.gen_range(-0.4..0.4)),
                    (rng.gen_range(-0.4..0.4), rng.gen_range(-0.4..0.4)),
                ]);
                let lhs = jacobian_det(&composed, &z).unwrap();
                let rhs = jacobian_det(&phi, &psi.evaluate(&z).unwrap()).unwrap()
                    * jacobian_det(&psi, &z).unwrap();
                assert!((lhs - rhs).norm() <= 1e-10 * (1.0 + rhs.norm()));
            }
        }
    }

    #[test]
    fn boundary_scan_named_maps() {
        let ball = Domain::unit_ball(2).unwrap();
        let id_scan = boundary_jacobian_scan(&HolomorphicMap::identity(2), &ball, 1000, 7).unwrap();
        assert_eq!(id_scan.min_abs, 1.0);
        assert_eq!(id_scan.max_abs, 1.0);

        let proj_scan =
            boundary_jacobian_scan(&HolomorphicMap::projection(2), &ball, 1000, 7).unwrap();
        assert_eq!(proj_scan.min_abs, 0.0);
        assert_eq!(proj_scan.max_abs, 0.0);

        let a = Complex64::new(0.6, 0.0);
        let b = Complex64::new(0.0, 0.8);
        let rot = HolomorphicMap::unitary(a, b).unwrap();
        let scan = boundary_jacobian_scan(&rot, &ball, 1000, 7).unwrap();
        assert_abs_diff_eq!(scan.min_abs, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(scan.max_abs, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn self_map_examples() {
        let ball = Domain::unit_ball(2).unwrap();
        let (ok, worst) = is_self_map(&HolomorphicMap::projection(2), &ball, 2000, 5).unwrap();
        assert!(ok && worst <= 0.0 + 1e-15);

        let double = HolomorphicMap::new(vec![
            MultiPoly::variable(2, 0).unwrap().scale(Complex64::new(2.0, 0.0)),
            MultiPoly::zero(2),
        ])
        .unwrap();
        let (ok, worst) = is_self_map(&double, &ball, 5000, 5).unwrap();
        assert!(!ok);
        assert!(worst > 0.5, "violation should approach 1 near (1,0), got {worst}");

        let (ok, worst) = is_self_map(&HolomorphicMap::scaling(2, 0.5), &ball, 2000, 5).unwrap();
        assert!(ok && worst <= -0.5 + 1e-12);
    }

    #[test]
    fn compact_range_examples() {
        let ball = Domain::unit_ball(2).unwrap();
        let (ok, margin) =
            range_compactly_contained(&HolomorphicMap::scaling(2, 0.5), &ball, 3000, 5).unwrap();
        assert!(ok);
        assert_abs_diff_eq!(margin, 0.5, epsilon = 1e-9);

        let (ok, margin) =
            range_compactly_contained(&HolomorphicMap::identity(2), &ball, 3000, 5).unwrap();
        assert!(!ok);
        assert!(margin < 1e-12);

        // Projection: the closure of the range touches (1, 0).
        let (ok, margin) =
            range_compactly_contained(&HolomorphicMap::projection(2), &ball, 2_000_000, 5)
                .unwrap();
        assert!(!ok, "margin {margin} should be below tolerance");

        let outward = HolomorphicMap::scaling(2, 2.0);
        assert!(matches!(
            range_compactly_contained(&outward, &ball, 1000, 5),
            Err(Error::NotSelfMap { .. })
        ));
    }

    #[test]
    fn preimage_examples() {
        let ball = Domain::unit_ball(2).unwrap();
        let all = boundary_preimage_samples(&HolomorphicMap::identity(2), &ball, 500, 1e-9, 3)
            .unwrap();
        assert_eq!(all.len(), 500);

        let none =
            boundary_preimage_samples(&HolomorphicMap::scaling(2, 0.5), &ball, 500, 1e-3, 3)
                .unwrap();
        assert!(none.is_empty());

        let proj =
            boundary_preimage_samples(&HolomorphicMap::projection(2), &ball, 20_000, 1e-3, 3)
                .unwrap();
        assert!(!proj.is_empty(), "expected hits near |z1| = 1");
        for p in &proj {
            assert!(p.coords()[0].norm() > 1.0 - 1e-3);
        }
    }

    #[test]
    fn conjugation_examples() {
        let scale = HolomorphicMap::scaling(2, 0.5);
        let id = HolomorphicMap::identity(2);
        assert_eq!(conjugate(&scale, &id).unwrap(), scale);

        // Diagonal B commutes with the scaling.
        let b = HolomorphicMap::diagonal(&[Complex64::new(1.0, 0.0), Complex64::new(2.0, 0.0)])
            .unwrap();
        assert_eq!(conjugate(&scale, &b).unwrap(), scale);

        // Round trip through B and B^{-1} restores the map exactly for
        // dyadic coefficients.
        let swap = HolomorphicMap::swap();
        let conj = conjugate(&swap, &b).unwrap();
        let b_inv =
            HolomorphicMap::diagonal(&[Complex64::new(1.0, 0.0), Complex64::new(0.5, 0.0)])
                .unwrap();
        assert_eq!(conjugate(&conj, &b_inv).unwrap(), swap);

        let singular = HolomorphicMap::diagonal(&[
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
        ])
        .unwrap();
        assert!(matches!(
            conjugate(&swap, &singular),
            Err(Error::SingularLinearMap(_))
        ));
        assert!(matches!(
            conjugate(&swap, &HolomorphicMap::projection(2)),
            Err(Error::SingularLinearMap(_))
        ));
    }

    /// Pointwise oracle: (B^{-1} o phi o B)(z) must equal evaluating the
    /// three maps in sequence.
    #[test]
    fn conjugation_evaluation_commutes() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let b = HolomorphicMap::new(vec![
            MultiPoly::variable(2, 0)
                .unwrap()
                .scale(Complex64::new(1.0, 0.5))
                .add(&MultiPoly::variable(2, 1).unwrap().scale(Complex64::new(0.25, 0.0)))
                .unwrap(),
            MultiPoly::variable(2, 1).unwrap().scale(Complex64::new(0.0, 2.0)),
        ])
        .unwrap();
        let b_matrix_inv = invert_linear(&b.linear_matrix().unwrap()).unwrap();
        for _ in 0..100 {
            let phi = rand_map(&mut rng, 2);
            let conj = conjugate(&phi, &b).unwrap();
            let z = cpt(&[
                (rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5)),
                (rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5)),
            ]);
            let direct = conj.evaluate(&z).unwrap();
            let bz = b.evaluate(&z).unwrap();
            let phibz = phi.evaluate(&bz).unwrap();
            let seq: Vec<Complex64> = (0..2)
                .map(|i| {
                    b_matrix_inv[i][0] * phibz.coords()[0] + b_matrix_inv[i][1] * phibz.coords()[1]
                })
                .collect();
            for i in 0..2 {
                assert!(
                    (direct.coords()[i] - seq[i]).norm() <= 1e-12 * (1.0 + seq[i].norm()),
                    "{:?} vs {:?}",
                    direct.coords()[i],
                    seq[i]
                );
            }
        }
    }

    /// For linear B the determinant factors cancel, so the conjugated map's
    /// Jacobian modulus at z equals the original's at B z.
    #[test]
    fn conjugated_scan_respects_chain_rule() {
        let phi = HolomorphicMap::new(vec![
            MultiPoly::variable(2, 0).unwrap().pow(2).scale(Complex64::new(0.5, 0.0)),
            MultiPoly::variable(2, 1).unwrap().scale(Complex64::new(0.25, 0.0)),
        ])
        .unwrap();
        let b = HolomorphicMap::diagonal(&[Complex64::new(1.0, 0.0), Complex64::new(2.0, 0.0)])
            .unwrap();
        let psi = conjugate(&phi, &b).unwrap();
        let ellipsoid = Domain::ellipsoid(vec![1.0, 0.5]).unwrap();
        for z in geometry::sample_boundary(&ellipsoid, 200, 17) {
            let bz = b.evaluate(&z).unwrap();
            let lhs = jacobian_det(&psi, &z).unwrap().norm();
            let rhs = jacobian_det(&phi, &bz).unwrap().norm();
            assert!((lhs - rhs).abs() <= 1e-10 * (1.0 + rhs));
        }
    }
}
