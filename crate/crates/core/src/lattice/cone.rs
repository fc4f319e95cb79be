use num_integer::Integer;

use super::linalg;
use super::{range_points, ExponentVec};
use crate::error::{Error, Result};

/// A simplicial rational cone, read as the monoid of its lattice points.
///
/// `rays` are the primitive extreme rays, `generators` a Hilbert basis of the
/// lattice points (equal to the rays when the cone is unimodular), and
/// `halfspaces` the normals `h` with `h·x ≥ 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cone {
    pub id: usize,
    n: usize,
    rays: Vec<ExponentVec>,
    generators: Vec<ExponentVec>,
    halfspaces: Vec<Vec<i64>>,
    // det · (coordinates of x in the ray basis) = adj · x, with det > 0
    adj: Vec<Vec<i64>>,
    det: i64,
    // lattice points of the half-open fundamental parallelepiped, zero first
    parallelepiped: Vec<ExponentVec>,
}

fn to_i128(v: &ExponentVec) -> Vec<i128> {
    v.coords().iter().map(|&c| c as i128).collect()
}

impl Cone {
    /// The cone spanned by `n` linearly independent rays.
    pub fn simplicial(id: usize, rays: Vec<ExponentVec>) -> Result<Cone> {
        let n = rays.first().map_or(0, |r| r.dim());
        if n == 0 || rays.len() != n || rays.iter().any(|r| r.dim() != n) {
            return Err(Error::UnsupportedCone(format!(
                "expected {n} rays of dimension {n}, got {}",
                rays.len()
            )));
        }
        let rays: Vec<ExponentVec> = rays
            .into_iter()
            .map(|r| {
                let p = linalg::primitive(&to_i128(&r));
                ExponentVec(p.iter().map(|&c| c as i64).collect())
            })
            .collect();
        let m: Vec<Vec<i128>> = (0..n)
            .map(|i| (0..n).map(|k| rays[k].coords()[i] as i128).collect())
            .collect();
        let mut det = linalg::det(&m);
        if det == 0 {
            return Err(Error::UnsupportedCone("rays are linearly dependent".into()));
        }
        let mut adj = linalg::adjugate(&m);
        if det < 0 {
            det = -det;
            for row in adj.iter_mut() {
                for v in row.iter_mut() {
                    *v = -*v;
                }
            }
        }
        let halfspaces = adj
            .iter()
            .map(|row| linalg::primitive(row).iter().map(|&c| c as i64).collect())
            .collect();
        let adj: Vec<Vec<i64>> = adj
            .iter()
            .map(|row| row.iter().map(|&c| c as i64).collect())
            .collect();
        let mut cone = Cone {
            id,
            n,
            generators: rays.clone(),
            rays,
            halfspaces,
            adj,
            det: det as i64,
            parallelepiped: vec![ExponentVec::zero(n)],
        };
        if cone.det != 1 {
            cone.parallelepiped = cone.parallelepiped_points();
            cone.generators = cone.hilbert_basis();
        }
        Ok(cone)
    }

    /// Like [`Cone::simplicial`] but with an explicit half-space description, which must
    /// agree with the rays on a sample box.
    pub fn with_halfspaces(
        id: usize,
        rays: Vec<ExponentVec>,
        halfspaces: Vec<Vec<i64>>,
    ) -> Result<Cone> {
        let mut cone = Cone::simplicial(id, rays)?;
        let from_rays = cone.clone();
        cone.halfspaces = halfspaces;
        if !cone.consistent_with(&from_rays, if cone.n <= 4 { 5 } else { 2 }) {
            return Err(Error::UnsupportedCone(
                "half-spaces and generators describe different sets".into(),
            ));
        }
        Ok(cone)
    }

    fn consistent_with(&self, other: &Cone, radius: i64) -> bool {
        super::box_points(self.n, radius)
            .iter()
            .all(|x| self.contains(x) == other.contains_by_coords(x))
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn rays(&self) -> &[ExponentVec] {
        &self.rays
    }

    pub fn generators(&self) -> &[ExponentVec] {
        &self.generators
    }

    pub fn halfspaces(&self) -> &[Vec<i64>] {
        &self.halfspaces
    }

    pub fn is_unimodular(&self) -> bool {
        self.det == 1
    }

    /// Index of the sublattice spanned by the rays.
    pub fn determinant(&self) -> i64 {
        self.det
    }

    /// `h·v ≥ 0` for every half-space.
    pub fn contains(&self, v: &ExponentVec) -> bool {
        self.halfspaces.iter().all(|h| v.dot(h) >= 0)
    }

    fn contains_by_coords(&self, v: &ExponentVec) -> bool {
        self.adj.iter().all(|row| v.dot(row) >= 0)
    }

    /// Rows `a_k` with `a_k·x = det · λ_k(x)`, where `λ` are the ray coordinates.
    pub fn coordinate_forms(&self) -> &[Vec<i64>] {
        &self.adj
    }

    /// `det ·` (coordinates of `x` in the ray basis).
    pub fn scaled_coords(&self, x: &ExponentVec) -> Vec<i64> {
        self.adj.iter().map(|row| x.dot(row)).collect()
    }

    fn combine(&self, coeffs: &[i64]) -> ExponentVec {
        let mut out = ExponentVec::zero(self.n);
        for (c, r) in coeffs.iter().zip(&self.rays) {
            for d in 0..self.n {
                out.0[d] += c * r.coords()[d];
            }
        }
        out
    }

    /// Positive linear form on the cone; equals the coordinate sum for unimodular cones.
    pub fn height(&self, x: &ExponentVec) -> i64 {
        self.scaled_coords(x).iter().sum()
    }

    /// The lattice is spanned by the generators.
    pub fn generates_group(&self) -> bool {
        let v: Vec<Vec<i128>> = self.generators.iter().map(to_i128).collect();
        linalg::lattice_index(&v, self.n) == Some(1)
    }

    /// No line is contained in the cone.
    pub fn is_pointed(&self) -> bool {
        let h: Vec<Vec<i128>> = self
            .halfspaces
            .iter()
            .map(|r| r.iter().map(|&c| c as i128).collect())
            .collect();
        linalg::rank(&h) == self.n
    }

    /// `s = u − v` with `u, v` in the cone, from the sign split of the ray coordinates.
    pub fn factorize(&self, s: &ExponentVec) -> Result<(ExponentVec, ExponentVec)> {
        if self.det != 1 {
            return Err(Error::UnsupportedCone(format!(
                "cone {} is not unimodular (determinant {})",
                self.id, self.det
            )));
        }
        let c = self.scaled_coords(s);
        let pos: Vec<i64> = c.iter().map(|&x| x.max(0)).collect();
        let neg: Vec<i64> = c.iter().map(|&x| (-x).max(0)).collect();
        Ok((self.combine(&pos), self.combine(&neg)))
    }

    /// Generator of `(a + C) ∩ (b + C)` for a unimodular cone.
    pub fn shifted_intersection(&self, a: &ExponentVec, b: &ExponentVec) -> Result<ExponentVec> {
        if self.det != 1 {
            return Err(Error::UnsupportedCone(format!(
                "cone {} is not unimodular (determinant {})",
                self.id, self.det
            )));
        }
        let ca = self.scaled_coords(a);
        let cb = self.scaled_coords(b);
        let m: Vec<i64> = ca.iter().zip(&cb).map(|(x, y)| *x.max(y)).collect();
        Ok(self.combine(&m))
    }

    /// Minimal lattice points of `(a + C) ∩ (b + C)` for any simplicial cone.
    pub fn shifted_meet(&self, a: &ExponentVec, b: &ExponentVec) -> Vec<ExponentVec> {
        if self.det == 1 {
            return vec![self.shifted_intersection(a, b).unwrap()];
        }
        let ca = self.scaled_coords(a);
        let cb = self.scaled_coords(b);
        let m: Vec<i64> = ca.iter().zip(&cb).map(|(x, y)| *x.max(y)).collect();
        // Minimal points lie in m/det + fundamental parallelepiped.
        let mut lo = vec![0i64; self.n];
        let mut hi = vec![0i64; self.n];
        for d in 0..self.n {
            let base: i64 = (0..self.n).map(|k| self.rays[k].coords()[d] * m[k]).sum();
            let neg: i64 = self.rays.iter().map(|r| r.coords()[d].min(0)).sum();
            let pos: i64 = self.rays.iter().map(|r| r.coords()[d].max(0)).sum();
            lo[d] = Integer::div_floor(&base, &self.det) + neg;
            hi[d] = Integer::div_floor(&(base + self.det - 1), &self.det) + pos;
        }
        let cands: Vec<ExponentVec> = range_points(&lo, &hi)
            .into_iter()
            .filter(|x| {
                self.scaled_coords(x)
                    .iter()
                    .zip(&m)
                    .all(|(c, mk)| c >= mk)
            })
            .collect();
        self.minimal_elements(cands)
    }

    /// Some `v` in the cone with `s + v` in the cone.
    pub fn shift_into(&self, s: &ExponentVec) -> ExponentVec {
        if self.det == 1 {
            return self.factorize(s).unwrap().1;
        }
        let w = self.interior_point();
        let mut k = 0i64;
        for h in &self.halfspaces {
            let hs = s.dot(h);
            let hw = w.dot(h);
            if hs < 0 {
                k = k.max((-hs + hw - 1) / hw);
            }
        }
        w.scale(k)
    }

    /// Sum of the rays; strictly inside the cone.
    pub fn interior_point(&self) -> ExponentVec {
        self.rays
            .iter()
            .fold(ExponentVec::zero(self.n), |acc, r| &acc + r)
    }

    /// Whether `x` lies strictly inside the cone.
    pub fn contains_strictly(&self, x: &ExponentVec) -> bool {
        self.halfspaces.iter().all(|h| x.dot(h) > 0)
    }

    /// Lattice points of the cone with height at most `h`, ordered by height then lex.
    pub fn points_up_to_height(&self, h: i64) -> Vec<ExponentVec> {
        // Each point is uniquely p + Σ k_j ray_j with p in the parallelepiped, and
        // every ray has height det.
        let mut pts = Vec::new();
        for p in &self.parallelepiped {
            let hp = self.height(p);
            if hp > h {
                continue;
            }
            let budget = (h - hp) / self.det;
            let mut k = vec![0i64; self.n];
            loop {
                pts.push(&self.combine(&k) + p);
                let mut d = 0;
                loop {
                    if d == self.n {
                        break;
                    }
                    k[d] += 1;
                    if k.iter().sum::<i64>() <= budget {
                        break;
                    }
                    k[d] = 0;
                    d += 1;
                }
                if d == self.n {
                    break;
                }
            }
        }
        pts.sort_by_cached_key(|x| (self.height(x), x.clone()));
        pts
    }

    /// Elements of `points` not above another element (`x − y ∈ C`), by increasing height.
    pub fn minimal_elements(&self, mut points: Vec<ExponentVec>) -> Vec<ExponentVec> {
        points.sort_by_key(|x| (self.height(x), x.clone()));
        points.dedup();
        let mut out: Vec<ExponentVec> = Vec::new();
        for x in points {
            if !out.iter().any(|g| self.contains(&(&x - g))) {
                out.push(x);
            }
        }
        out
    }

    /// Whether `x` lies in `g + C` for one of the `gens`.
    pub fn covered(&self, gens: &[ExponentVec], x: &ExponentVec) -> bool {
        gens.iter().any(|g| self.contains(&(x - g)))
    }

    fn parallelepiped_points(&self) -> Vec<ExponentVec> {
        let mut lo = vec![0i64; self.n];
        let mut hi = vec![0i64; self.n];
        for r in &self.rays {
            for d in 0..self.n {
                let c = r.coords()[d];
                if c < 0 {
                    lo[d] += c;
                } else {
                    hi[d] += c;
                }
            }
        }
        let mut pts: Vec<ExponentVec> = range_points(&lo, &hi)
            .into_iter()
            .filter(|x| {
                self.scaled_coords(x)
                    .iter()
                    .all(|&c| c >= 0 && c < self.det)
            })
            .collect();
        pts.sort_by_key(|x| (self.height(x), x.clone()));
        pts
    }

    fn hilbert_basis(&self) -> Vec<ExponentVec> {
        // Irreducible elements among the rays and the nonzero parallelepiped points.
        let cands: Vec<ExponentVec> =
            self.parallelepiped.iter().filter(|x| !x.is_zero()).cloned().collect();
        let mut all = self.rays.clone();
        all.extend(cands);
        let irreducible: Vec<ExponentVec> = all
            .iter()
            .filter(|x| {
                !all.iter()
                    .any(|g| g != *x && self.contains(&(*x - g)) && !(*x - g).is_zero())
            })
            .cloned()
            .collect();
        irreducible
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::ev;

    #[test]
    fn test_unimodular_cone_factorization() {
        let t2 = Cone::simplicial(2, vec![ev(&[1, 0]), ev(&[-1, -1])]).unwrap();
        assert!(t2.is_unimodular());
        let (u, v) = t2.factorize(&ev(&[0, 1])).unwrap();
        assert_eq!(u, ev(&[0, 0]));
        assert_eq!(v, ev(&[0, -1]));
    }

    #[test]
    fn test_non_unimodular_hilbert_basis() {
        let c = Cone::simplicial(0, vec![ev(&[-1, -1]), ev(&[-2, 3])]).unwrap();
        assert_eq!(c.determinant(), 5);
        assert!(c.generates_group());
        assert!(c.factorize(&ev(&[1, 0])).is_err());
        // Every lattice point in the cone is a nonnegative combination of the generators.
        for x in crate::lattice::box_points(2, 6) {
            if !c.contains(&x) {
                continue;
            }
            let mut reachable = vec![ev(&[0, 0])];
            let mut found = x.is_zero();
            let mut frontier = reachable.clone();
            while !found && !frontier.is_empty() {
                let mut next = Vec::new();
                for p in &frontier {
                    for g in c.generators() {
                        let q = p + g;
                        if q == x {
                            found = true;
                        }
                        if c.contains(&(&x - &q)) && !reachable.contains(&q) {
                            reachable.push(q.clone());
                            next.push(q);
                        }
                    }
                }
                frontier = next;
            }
            assert!(found, "{x} not generated");
        }
    }

    #[test]
    fn test_shift_into_general_cone() {
        let c = Cone::simplicial(0, vec![ev(&[-1, -1]), ev(&[-2, 3])]).unwrap();
        for s in crate::lattice::box_points(2, 4) {
            let v = c.shift_into(&s);
            assert!(c.contains(&v));
            assert!(c.contains(&(&s + &v)));
        }
    }

    #[test]
    fn test_shifted_meet_matches_scan() {
        let c = Cone::simplicial(0, vec![ev(&[-1, -1]), ev(&[-2, 3])]).unwrap();
        let a = ev(&[1, 0]);
        let b = ev(&[0, 2]);
        let gens = c.shifted_meet(&a, &b);
        for x in crate::lattice::box_points(2, 10) {
            let inside = c.contains(&(&x - &a)) && c.contains(&(&x - &b));
            assert_eq!(inside, c.covered(&gens, &x), "{x}");
        }
    }

    #[test]
    fn test_points_up_to_height_matches_scan() {
        let cones = [
            Cone::simplicial(0, vec![ev(&[-1, -1]), ev(&[-2, 3])]).unwrap(),
            Cone::simplicial(1, vec![ev(&[1, 0]), ev(&[-1, -1])]).unwrap(),
        ];
        for c in &cones {
            let h = 4 * c.determinant();
            let got = c.points_up_to_height(h);
            let mut want: Vec<ExponentVec> = crate::lattice::box_points(2, 30)
                .into_iter()
                .filter(|x| c.contains(x) && c.height(x) <= h)
                .collect();
            want.sort_by_key(|x| (c.height(x), x.clone()));
            assert_eq!(got, want);
        }
        let t3 = Cone::simplicial(0, vec![ev(&[1, 0, 0]), ev(&[0, 1, 0]), ev(&[-1, -1, -1])])
            .unwrap();
        assert_eq!(t3.points_up_to_height(3).len(), 20);
    }
}
