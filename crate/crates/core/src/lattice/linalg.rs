//! Small exact integer linear algebra (dimensions ≤ 4 in practice).

use num_integer::Integer;

pub(crate) fn det(m: &[Vec<i128>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    // Bareiss fraction-free elimination.
    let mut a: Vec<Vec<i128>> = m.to_vec();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&r| a[r][k] != 0) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

fn minor(m: &[Vec<i128>], row: usize, col: usize) -> Vec<Vec<i128>> {
    m.iter()
        .enumerate()
        .filter(|(i, _)| *i != row)
        .map(|(_, r)| {
            r.iter()
                .enumerate()
                .filter(|(j, _)| *j != col)
                .map(|(_, v)| *v)
                .collect()
        })
        .collect()
}

/// Classical adjugate: `adj(m) · m = det(m) · I`.
pub(crate) fn adjugate(m: &[Vec<i128>]) -> Vec<Vec<i128>> {
    let n = m.len();
    if n == 1 {
        return vec![vec![1]];
    }
    let mut adj = vec![vec![0i128; n]; n];
    for i in 0..n {
        for j in 0..n {
            let s = if (i + j) % 2 == 0 { 1 } else { -1 };
            adj[j][i] = s * det(&minor(m, i, j));
        }
    }
    adj
}

/// Rank over Q.
pub(crate) fn rank(rows: &[Vec<i128>]) -> usize {
    let mut a: Vec<Vec<i128>> = rows.to_vec();
    let ncols = a.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..a.len()).find(|&i| a[i][c] != 0) else {
            continue;
        };
        a.swap(r, p);
        for i in 0..a.len() {
            if i != r && a[i][c] != 0 {
                let (x, y) = (a[r][c], a[i][c]);
                for j in 0..ncols {
                    a[i][j] = a[i][j] * x - a[r][j] * y;
                }
                reduce_row(&mut a[i]);
            }
        }
        r += 1;
        if r == a.len() {
            break;
        }
    }
    r
}

fn reduce_row(row: &mut [i128]) {
    let g = row.iter().fold(0i128, |g, v| g.gcd(v));
    if g > 1 {
        for v in row.iter_mut() {
            *v /= g;
        }
    }
}

/// Divides by the gcd of the entries.
pub(crate) fn primitive(v: &[i128]) -> Vec<i128> {
    let mut out = v.to_vec();
    reduce_row(&mut out);
    out
}

/// Index of the lattice spanned by `vectors` in `Z^n`, or `None` if the rank is below `n`.
pub(crate) fn lattice_index(vectors: &[Vec<i128>], n: usize) -> Option<u128> {
    // Row-style Hermite reduction using Euclid on each column.
    let mut rows: Vec<Vec<i128>> = vectors.to_vec();
    let mut pivots = Vec::new();
    let mut start = 0;
    for c in 0..n {
        loop {
            let nonzero: Vec<usize> = (start..rows.len()).filter(|&i| rows[i][c] != 0).collect();
            if nonzero.len() <= 1 {
                break;
            }
            let p = *nonzero.iter().min_by_key(|&&i| rows[i][c].abs()).unwrap();
            for &i in &nonzero {
                if i != p {
                    let q = Integer::div_floor(&rows[i][c], &rows[p][c]);
                    for j in 0..n {
                        rows[i][j] -= q * rows[p][j];
                    }
                }
            }
        }
        if let Some(p) = (start..rows.len()).find(|&i| rows[i][c] != 0) {
            rows.swap(start, p);
            pivots.push(rows[start][c].unsigned_abs());
            start += 1;
        } else {
            return None;
        }
    }
    Some(pivots.iter().product())
}

/// A nonzero vector orthogonal to `n - 1` independent rows (generalized cross product).
pub(crate) fn cross(rows: &[Vec<i128>], n: usize) -> Vec<i128> {
    debug_assert_eq!(rows.len() + 1, n);
    (0..n)
        .map(|k| {
            let sub: Vec<Vec<i128>> = rows
                .iter()
                .map(|r| {
                    r.iter()
                        .enumerate()
                        .filter(|(j, _)| *j != k)
                        .map(|(_, v)| *v)
                        .collect()
                })
                .collect();
            let s = if k % 2 == 0 { 1 } else { -1 };
            s * det(&sub)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn test_det_and_adjugate() {
        let m = vec![vec![2, 1, 0], vec![0, 1, 3], vec![1, 0, 1]];
        assert_eq!(det(&m), 5);
        let adj = adjugate(&m);
        for i in 0..3 {
            for j in 0..3 {
                let s: i128 = (0..3).map(|k| adj[i][k] * m[k][j]).sum();
                assert_eq!(s, if i == j { 5 } else { 0 });
            }
        }
    }

    #[test]
    fn test_lattice_index() {
        assert_eq!(lattice_index(&[vec![1, 0], vec![0, 1]], 2), Some(1));
        assert_eq!(lattice_index(&[vec![2, 0], vec![0, 1]], 2), Some(2));
        assert_eq!(lattice_index(&[vec![2, 0], vec![3, 0], vec![0, 1]], 2), Some(1));
        assert_eq!(lattice_index(&[vec![1, 1]], 2), None);
        assert_eq!(lattice_index(&[vec![-1, -1], vec![-2, 3]], 2), Some(5));
    }

    #[test]
    fn test_rank_and_cross() {
        assert_eq!(rank(&[vec![1, 2, 3], vec![2, 4, 6]]), 1);
        assert_eq!(rank(&[vec![1, 2, 3], vec![0, 1, 1], vec![1, 3, 4]]), 2);
        let c = cross(&[vec![1, 0, 0], vec![0, 1, 0]], 3);
        assert_eq!(c, vec![0, 0, 1]);
    }
}
