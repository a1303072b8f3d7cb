pub type IntMatrix = Vec<Vec<i128>>;

/// `left * input * right = diag(diag)`; `right_inv` is the inverse of `right`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithDecomposition {
    pub left: IntMatrix,
    pub diag: Vec<i128>,
    pub right: IntMatrix,
    pub right_inv: IntMatrix,
}

fn identity(n: usize) -> IntMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| i128::from(i == j)).collect())
        .collect()
}

/// Smith normal form with min-abs pivoting. Works for any m x n integer matrix.
pub fn smith_normal_form(a: &[Vec<i128>]) -> SmithDecomposition {
    let m = a.len();
    let n = if m == 0 { 0 } else { a[0].len() };
    let mut d: IntMatrix = a.to_vec();
    let mut left = identity(m);
    let mut right = identity(n);
    let mut right_inv = identity(n);

    let swap_cols = |d: &mut IntMatrix, r: &mut IntMatrix, ri: &mut IntMatrix, i: usize, j: usize| {
        for row in d.iter_mut() {
            row.swap(i, j);
        }
        for row in r.iter_mut() {
            row.swap(i, j);
        }
        ri.swap(i, j);
    };
    // col_j -= q * col_t
    let col_sub = |d: &mut IntMatrix, r: &mut IntMatrix, ri: &mut IntMatrix, j: usize, t: usize, q: i128| {
        for row in d.iter_mut() {
            row[j] -= q * row[t];
        }
        for row in r.iter_mut() {
            row[j] -= q * row[t];
        }
        let rj = ri[j].clone();
        for (x, y) in ri[t].iter_mut().zip(rj.iter()) {
            *x += q * y;
        }
    };

    for t in 0..m.min(n) {
        loop {
            // pivot: smallest nonzero |entry| in the trailing block
            let mut best: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    if d[i][j] != 0 && best.map_or(true, |(bi, bj)| d[i][j].abs() < d[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                break;
            };
            d.swap(t, pi);
            left.swap(t, pi);
            if pj != t {
                swap_cols(&mut d, &mut right, &mut right_inv, t, pj);
            }
            let piv = d[t][t];
            let mut clean = true;
            for i in t + 1..m {
                let q = d[i][t].div_euclid(piv);
                if q != 0 {
                    let (rt, lt) = (d[t].clone(), left[t].clone());
                    for (x, y) in d[i].iter_mut().zip(rt.iter()) {
                        *x -= q * y;
                    }
                    for (x, y) in left[i].iter_mut().zip(lt.iter()) {
                        *x -= q * y;
                    }
                }
                if d[i][t] != 0 {
                    clean = false;
                }
            }
            for j in t + 1..n {
                let q = d[t][j].div_euclid(piv);
                if q != 0 {
                    col_sub(&mut d, &mut right, &mut right_inv, j, t, q);
                }
                if d[t][j] != 0 {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // divisibility of the trailing block by the pivot
            let bad = (t + 1..m).find(|&i| (t + 1..n).any(|j| d[i][j] % piv != 0));
            match bad {
                Some(i) => {
                    let (ri, li) = (d[i].clone(), left[i].clone());
                    for (x, y) in d[t].iter_mut().zip(ri.iter()) {
                        *x += y;
                    }
                    for (x, y) in left[t].iter_mut().zip(li.iter()) {
                        *x += y;
                    }
                }
                None => break,
            }
        }
        if d[t][t] < 0 {
            for x in d[t].iter_mut() {
                *x = -*x;
            }
            for x in left[t].iter_mut() {
                *x = -*x;
            }
        }
    }
    let diag = (0..m.min(n)).map(|i| d[i][i]).collect();
    SmithDecomposition {
        left,
        diag,
        right,
        right_inv,
    }
}

pub fn mat_mul(a: &[Vec<i128>], b: &[Vec<i128>]) -> IntMatrix {
    let n = a.len();
    let k = b.len();
    let m = if k == 0 { 0 } else { b[0].len() };
    let mut c = vec![vec![0i128; m]; n];
    for i in 0..n {
        for l in 0..k {
            if a[i][l] == 0 {
                continue;
            }
            for j in 0..m {
                c[i][j] += a[i][l] * b[l][j];
            }
        }
    }
    c
}

pub fn transpose(a: &[Vec<i128>]) -> IntMatrix {
    if a.is_empty() {
        return Vec::new();
    }
    (0..a[0].len())
        .map(|j| a.iter().map(|row| row[j]).collect())
        .collect()
}

/// Exact determinant by fraction-free elimination.
pub fn det(a: &[Vec<i128>]) -> i128 {
    let n = a.len();
    if n == 0 {
        return 1;
    }
    let mut m = a.to_vec();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if m[k][k] == 0 {
            match (k + 1..n).find(|&i| m[i][k] != 0) {
                Some(i) => {
                    m.swap(k, i);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
        }
        prev = m[k][k];
    }
    sign * m[n - 1][n - 1]
}
