// Independent reference computations for the integration tests. Nothing here
// calls into the library's numerical kernels.
#![allow(dead_code)]

/// Row-major dense matrix, rows x cols.
#[derive(Clone, Debug)]
pub struct Plain {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<f64>,
}

impl Plain {
    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Plain { rows, cols, data }
    }

    pub fn at(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.cols + c]
    }

    pub fn from_lib(a: &omp_prior::DenseMatrix) -> Self {
        Plain::from_fn(a.rows(), a.cols(), |r, c| a.get(r, c))
    }

    pub fn col_dot(&self, i: usize, v: &[f64]) -> f64 {
        (0..self.rows).map(|r| self.at(r, i) * v[r]).sum()
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.rows)
            .map(|r| (0..self.cols).map(|c| self.at(r, c) * x[c]).sum())
            .collect()
    }

    /// Gram matrix of the columns in `s`.
    pub fn sub_gram(&self, s: &[usize]) -> Vec<Vec<f64>> {
        s.iter()
            .map(|&i| {
                s.iter()
                    .map(|&j| (0..self.rows).map(|r| self.at(r, i) * self.at(r, j)).sum())
                    .collect()
            })
            .collect()
    }
}

pub fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Gaussian elimination with partial pivoting.
pub fn solve(mut m: Vec<Vec<f64>>, mut rhs: Vec<f64>) -> Vec<f64> {
    let n = rhs.len();
    for col in 0..n {
        let p = (col..n)
            .max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs()))
            .unwrap();
        m.swap(col, p);
        rhs.swap(col, p);
        for r in col + 1..n {
            let f = m[r][col] / m[col][col];
            for c in col..n {
                m[r][c] -= f * m[col][c];
            }
            rhs[r] -= f * rhs[col];
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let s: f64 = (r + 1..n).map(|c| m[r][c] * x[c]).sum();
        x[r] = (rhs[r] - s) / m[r][r];
    }
    x
}

/// Least squares on the columns `s` through the normal equations.
pub fn normal_equations(a: &Plain, s: &[usize], y: &[f64]) -> Vec<f64> {
    let rhs: Vec<f64> = s.iter().map(|&i| a.col_dot(i, y)).collect();
    solve(a.sub_gram(s), rhs)
}

/// Plain OMP from an empty support: pick the largest |<a_i, r>| among
/// unselected columns (lowest index within 1e-9 of the max), refit, repeat.
pub fn straight_omp(a: &Plain, y: &[f64], steps: usize) -> (Vec<usize>, Vec<f64>) {
    let mut chosen: Vec<usize> = Vec::new();
    let mut r = y.to_vec();
    let mut coef = Vec::new();
    for _ in 0..steps {
        let scores: Vec<(usize, f64)> = (0..a.cols)
            .filter(|i| !chosen.contains(i))
            .map(|i| (i, a.col_dot(i, &r).abs()))
            .collect();
        let best = scores.iter().map(|s| s.1).fold(f64::NEG_INFINITY, f64::max);
        let pick = scores.iter().find(|s| s.1 >= best - 1e-9).unwrap().0;
        chosen.push(pick);
        coef = normal_equations(a, &chosen, y);
        r = y.to_vec();
        for (k, &j) in chosen.iter().enumerate() {
            for row in 0..a.rows {
                r[row] -= coef[k] * a.at(row, j);
            }
        }
    }
    let mut x = vec![0.0; a.cols];
    for (k, &j) in chosen.iter().enumerate() {
        x[j] = coef[k];
    }
    (chosen, x)
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending.
pub fn jacobi_eigenvalues(mut m: Vec<Vec<f64>>) -> Vec<f64> {
    let n = m.len();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| m[i][j] * m[i][j])
            .sum();
        if off < 1e-30 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if m[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (m[q][q] - m[p][p]) / (2.0 * m[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (mkp, mkq) = (m[k][p], m[k][q]);
                    m[k][p] = c * mkp - s * mkq;
                    m[k][q] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let (mpk, mqk) = (m[p][k], m[q][k]);
                    m[p][k] = c * mpk - s * mqk;
                    m[q][k] = s * mpk + c * mqk;
                }
            }
        }
    }
    let mut ev: Vec<f64> = (0..n).map(|i| m[i][i]).collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Every `k`-subset of `0..n` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Restricted isometry constant by brute force with the Jacobi solver.
pub fn brute_ric(a: &Plain, order: usize) -> f64 {
    subsets(a.cols, order)
        .iter()
        .map(|s| {
            let ev = jacobi_eigenvalues(a.sub_gram(s));
            (ev[ev.len() - 1] - 1.0).max(1.0 - ev[0])
        })
        .fold(0.0, f64::max)
}

/// The three comparison inequalities, cleared of fractions:
/// `k+1 > 2c²`, `g >= ceil((c²-1)(k+1) / c²)` with `g < k`,
/// and `1 <= b <= (c-2) * ceil(k/2)`.
pub fn comparison_oracle(k: usize, g: usize, b: usize, c: usize) -> [bool; 3] {
    let c2 = c * c;
    let g_min = ((c2 - 1) * (k + 1)).div_ceil(c2);
    [
        k + 1 > 2 * c2,
        g >= g_min && g < k,
        b >= 1 && b <= (c - 2) * k.div_ceil(2),
    ]
}
