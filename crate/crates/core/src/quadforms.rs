//! Half-integral symmetric matrices and their local invariants.
//!
//! A matrix T is stored through its doubled form G = 2T, which is an integer matrix
//! with even diagonal.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exactnum::arith::{legendre_big, squarefree_decompose, val_big};
use crate::exactnum::{det, mat_mul, smith_normal_form, transpose, IntMatrix, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HalfIntegralMatrix {
    n: usize,
    g: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscriminantData {
    pub big_d: i128,
    /// Fundamental discriminant (even rank only).
    pub fund: Option<i128>,
    /// Conductor, so that (-1)^(r/2) D = fund * cond^2 (even rank only).
    pub cond: Option<i128>,
}

impl HalfIntegralMatrix {
    /// From the doubled matrix 2T.
    pub fn from_doubled(g: Vec<Vec<i64>>) -> Result<Self> {
        let n = g.len();
        for (i, row) in g.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidParams("matrix is not square".into()));
            }
            if row[i] % 2 != 0 {
                return Err(Error::InvalidParams("doubled matrix needs even diagonal".into()));
            }
            for j in 0..n {
                if g[i][j] != g[j][i] {
                    return Err(Error::InvalidParams("matrix is not symmetric".into()));
                }
            }
        }
        Ok(HalfIntegralMatrix { n, g })
    }

    fn from_doubled_i128(g: &[Vec<i128>]) -> Self {
        let g = g
            .iter()
            .map(|row| row.iter().map(|&x| i64::try_from(x).expect("entry fits in i64")).collect())
            .collect();
        HalfIntegralMatrix::from_doubled(g).expect("internally produced matrix is half-integral")
    }

    pub fn zero(n: usize) -> Self {
        HalfIntegralMatrix {
            n,
            g: vec![vec![0; n]; n],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::diag(&vec![1; n])
    }

    /// diag(t_1, ..., t_n).
    pub fn diag(t: &[i64]) -> Self {
        let n = t.len();
        let mut g = vec![vec![0; n]; n];
        for i in 0..n {
            g[i][i] = 2 * t[i];
        }
        HalfIntegralMatrix { n, g }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn doubled(&self) -> &[Vec<i64>] {
        &self.g
    }

    pub fn doubled_i128(&self) -> IntMatrix {
        self.g
            .iter()
            .map(|row| row.iter().map(|&x| x as i128).collect())
            .collect()
    }

    /// Upper-triangular doubled entries, row-major.
    pub fn key_tuple(&self) -> Vec<i64> {
        let mut v = Vec::with_capacity(self.n * (self.n + 1) / 2);
        for i in 0..self.n {
            for j in i..self.n {
                v.push(self.g[i][j]);
            }
        }
        v
    }

    /// Canonical key "n:g11,g12,...,gnn" of the doubled matrix.
    pub fn key(&self) -> String {
        let entries: Vec<String> = self.key_tuple().iter().map(|x| x.to_string()).collect();
        format!("{}:{}", self.n, entries.join(","))
    }

    pub fn parse_key(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParams(format!("bad matrix key {s:?}"));
        let (n, rest) = s.split_once(':').ok_or_else(bad)?;
        let n: usize = n.trim().parse().map_err(|_| bad())?;
        let vals: Vec<i64> = if rest.trim().is_empty() {
            Vec::new()
        } else {
            rest.split(',')
                .map(|x| x.trim().parse::<i64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| bad())?
        };
        if vals.len() != n * (n + 1) / 2 {
            return Err(bad());
        }
        let mut g = vec![vec![0; n]; n];
        let mut it = vals.into_iter();
        for i in 0..n {
            for j in i..n {
                let v = it.next().unwrap();
                g[i][j] = v;
                g[j][i] = v;
            }
        }
        Self::from_doubled(g)
    }

    pub fn trace(&self) -> i64 {
        (0..self.n).map(|i| self.g[i][i] / 2).sum()
    }

    /// det(2T).
    pub fn det_doubled(&self) -> i128 {
        det(&self.doubled_i128())
    }

    /// det T as a rational.
    pub fn det(&self) -> Rational {
        Rational::new(BigInt::from(self.det_doubled()), BigInt::from(2).pow(self.n as u32))
    }

    pub fn rank(&self) -> usize {
        smith_normal_form(&self.doubled_i128())
            .diag
            .iter()
            .filter(|&&d| d != 0)
            .count()
    }

    /// Exact positive-semidefiniteness: every principal minor is nonnegative.
    pub fn is_psd(&self) -> bool {
        let n = self.n;
        let gi = self.doubled_i128();
        for mask in 1u32..(1u32 << n) {
            let idx: Vec<usize> = (0..n).filter(|&i| mask & (1 << i) != 0).collect();
            let sub: IntMatrix = idx
                .iter()
                .map(|&i| idx.iter().map(|&j| gi[i][j]).collect())
                .collect();
            if det(&sub) < 0 {
                return false;
            }
        }
        true
    }

    /// ᵗU T U.
    pub fn conjugate(&self, u: &[Vec<i128>]) -> Self {
        let g = self.doubled_i128();
        let h = mat_mul(&mat_mul(&transpose(u), &g), u);
        Self::from_doubled_i128(&h)
    }

    /// Splits T into its nondegenerate part: returns (T', U) with
    /// ᵗU T U = diag(T', 0) and U unimodular.
    pub fn block_reduce(&self) -> (HalfIntegralMatrix, IntMatrix) {
        let g = self.doubled_i128();
        let snf = smith_normal_form(&g);
        let r = snf.diag.iter().filter(|&&d| d != 0).count();
        let u = snf.right;
        let h = mat_mul(&mat_mul(&transpose(&u), &g), &u);
        debug_assert!((0..self.n).all(|i| (r..self.n).all(|j| h[i][j] == 0 && h[j][i] == 0)));
        let block: IntMatrix = h[..r].iter().map(|row| row[..r].to_vec()).collect();
        (Self::from_doubled_i128(&block), u)
    }

    /// The symmetric matrix S = T over Q.
    pub fn to_rational_matrix(&self) -> Vec<Vec<Rational>> {
        self.g
            .iter()
            .map(|row| {
                row.iter()
                    .map(|&x| Rational::new(BigInt::from(x), BigInt::from(2)))
                    .collect()
            })
            .collect()
    }
}

impl PartialOrd for HalfIntegralMatrix {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for HalfIntegralMatrix {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.n, self.key_tuple()).cmp(&(other.n, other.key_tuple()))
    }
}

impl fmt::Display for HalfIntegralMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.key())
    }
}

fn fundamental_split(x: i128) -> (i128, i128) {
    let (s, q) = squarefree_decompose(x);
    if s.rem_euclid(4) == 1 {
        (s, q)
    } else {
        debug_assert!(q % 2 == 0);
        (4 * s, q / 2)
    }
}

pub fn det_data(t: &HalfIntegralMatrix) -> Result<DiscriminantData> {
    let r = t.size();
    if r == 0 {
        return Ok(DiscriminantData {
            big_d: 1,
            fund: Some(1),
            cond: Some(1),
        });
    }
    let dg = t.det_doubled();
    if dg == 0 {
        return Err(Error::Degenerate);
    }
    if r % 2 == 1 {
        return Ok(DiscriminantData {
            big_d: dg / 2,
            fund: None,
            cond: None,
        });
    }
    let x = if (r / 2) % 2 == 0 { dg } else { -dg };
    let (d, f) = fundamental_split(x);
    Ok(DiscriminantData {
        big_d: dg,
        fund: Some(d),
        cond: Some(f),
    })
}

/// Square-class character of a nonzero integer in Q_l: 1 split, -1 unramified, 0 ramified.
pub fn xi_of_integer(x: &BigInt, l: u64) -> i32 {
    let (v, u) = val_big(x, l);
    if v % 2 == 1 {
        return 0;
    }
    if l == 2 {
        match u.mod_floor(&BigInt::from(8)).to_string().as_str() {
            "1" => 1,
            "5" => -1,
            _ => 0,
        }
    } else {
        legendre_big(&u, l)
    }
}

/// xi_l((-1)^(r/2) det T) for even rank.
pub fn xi(t: &HalfIntegralMatrix, l: u64) -> Result<i32> {
    let r = t.size();
    if r % 2 == 1 {
        return Err(Error::OddRank);
    }
    let dg = t.det_doubled();
    if dg == 0 {
        return Err(Error::Degenerate);
    }
    // 2^r is a square, so (-1)^(r/2) det(2T) has the square class of (-1)^(r/2) det T
    let x = if (r / 2) % 2 == 0 { dg } else { -dg };
    Ok(xi_of_integer(&BigInt::from(x), l))
}

fn square_class_integer(q: &Rational) -> BigInt {
    q.numer() * q.denom()
}

/// Local Hilbert symbol (a, b)_l.
pub fn hilbert_symbol(a: &Rational, b: &Rational, l: u64) -> i32 {
    assert!(!a.is_zero() && !b.is_zero(), "Hilbert symbol of zero");
    let (alpha, u) = val_big(&square_class_integer(a), l);
    let (beta, v) = val_big(&square_class_integer(b), l);
    if l == 2 {
        let m8 = BigInt::from(8);
        let u8 = u.mod_floor(&m8).to_string().parse::<i64>().unwrap();
        let v8 = v.mod_floor(&m8).to_string().parse::<i64>().unwrap();
        let eps = |x: i64| ((x - 1) / 2) % 2;
        let omega = |x: i64| ((x * x - 1) / 8) % 2;
        let e = eps(u8) * eps(v8) + alpha as i64 * omega(v8) + beta as i64 * omega(u8);
        if e % 2 == 0 {
            1
        } else {
            -1
        }
    } else {
        let mut s = 1;
        if (alpha as u64 * beta as u64 * ((l - 1) / 2)) % 2 == 1 {
            s = -s;
        }
        if beta % 2 == 1 {
            s *= legendre_big(&u, l);
        }
        if alpha % 2 == 1 {
            s *= legendre_big(&v, l);
        }
        s
    }
}

/// Diagonal entries of a rational diagonalization of a nondegenerate symmetric matrix.
pub fn rational_diagonalization(s: &[Vec<Rational>]) -> Result<Vec<Rational>> {
    let n = s.len();
    let mut a: Vec<Vec<Rational>> = s.to_vec();
    for k in 0..n {
        if a[k][k].is_zero() {
            if let Some(j) = (k + 1..n).find(|&j| !a[j][j].is_zero()) {
                a.swap(k, j);
                for row in a.iter_mut() {
                    row.swap(k, j);
                }
            } else if let Some(j) = (k + 1..n).find(|&j| !a[k][j].is_zero()) {
                // row/col k += row/col j makes the pivot 2 a_kj
                for c in 0..n {
                    let v = a[j][c].clone();
                    a[k][c] += v;
                }
                for rr in 0..n {
                    let v = a[rr][j].clone();
                    a[rr][k] += v;
                }
            } else {
                return Err(Error::Degenerate);
            }
        }
        let piv = a[k][k].clone();
        for i in k + 1..n {
            if a[i][k].is_zero() {
                continue;
            }
            let f = &a[i][k] / &piv;
            for c in 0..n {
                let v = &f * &a[k][c];
                a[i][c] -= v;
            }
            for rr in 0..n {
                let v = &f * &a[rr][k];
                a[rr][i] -= v;
            }
        }
    }
    Ok((0..n).map(|i| a[i][i].clone()).collect())
}

/// Hasse invariant prod_{i <= j} (a_i, a_j)_l of a diagonalization of T.
pub fn hasse_invariant(t: &HalfIntegralMatrix, l: u64) -> Result<i32> {
    if t.det_doubled() == 0 {
        return Err(Error::Degenerate);
    }
    let a = rational_diagonalization(&t.to_rational_matrix())?;
    let mut h = 1;
    for i in 0..a.len() {
        for j in i..a.len() {
            h *= hilbert_symbol(&a[i], &a[j], l);
        }
    }
    Ok(h)
}

/// Sign of the odd-rank functional equation.
pub fn eta(t: &HalfIntegralMatrix, l: u64) -> Result<i32> {
    let r = t.size();
    if r % 2 == 0 {
        return Err(Error::EvenRank);
    }
    let h = hasse_invariant(t, l)?;
    let d = t.det();
    let sign = if ((r - 1) / 2) % 2 == 0 { Rational::one() } else { -Rational::one() };
    let mid = hilbert_symbol(&d, &(&sign * &d), l);
    let last = if ((r * r - 1) / 8) % 2 == 1 {
        hilbert_symbol(&-Rational::one(), &-Rational::one(), l)
    } else {
        1
    };
    Ok(h * mid * last)
}

/// diag(T', 0_{n-r}).
pub fn block_embed(tp: &HalfIntegralMatrix, n: usize) -> HalfIntegralMatrix {
    assert!(n >= tp.size());
    let mut g = vec![vec![0; n]; n];
    for i in 0..tp.size() {
        for j in 0..tp.size() {
            g[i][j] = tp.g[i][j];
        }
    }
    HalfIntegralMatrix { n, g }
}

pub fn scale(t: &HalfIntegralMatrix, c: i64) -> HalfIntegralMatrix {
    HalfIntegralMatrix {
        n: t.n,
        g: t.g.iter().map(|row| row.iter().map(|&x| x * c).collect()).collect(),
    }
}

/// Pseudorandom element of GL(n, Z) built from bounded elementary matrices.
pub fn random_unimodular(n: usize, seed: u64) -> IntMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut u: IntMatrix = (0..n)
        .map(|i| (0..n).map(|j| i128::from(i == j)).collect())
        .collect();
    if n < 2 {
        if n == 1 && rng.gen_bool(0.5) {
            u[0][0] = -1;
        }
        return u;
    }
    for _ in 0..(3 * n) {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        match rng.gen_range(0..4) {
            0 => {
                // swap columns
                for row in u.iter_mut() {
                    row.swap(i, j);
                }
            }
            1 => {
                for row in u.iter_mut() {
                    row[i] = -row[i];
                }
            }
            _ => {
                let c: i128 = if rng.gen_bool(0.5) { 1 } else { -1 } * rng.gen_range(1..=2);
                for row in u.iter_mut() {
                    row[j] += c * row[i];
                }
            }
        }
    }
    u
}

pub fn random_unimodular_conjugate(t: &HalfIntegralMatrix, seed: u64) -> HalfIntegralMatrix {
    t.conjugate(&random_unimodular(t.size(), seed))
}

/// All positive-semidefinite half-integral T of size n with trace(T) <= bound,
/// sorted by canonical key.
pub fn enumerate_indices(n: usize, bound: i64) -> Vec<HalfIntegralMatrix> {
    let mut out = Vec::new();
    let mut diag = vec![0i64; n];
    fn diags(i: usize, left: i64, diag: &mut Vec<i64>, acc: &mut Vec<Vec<i64>>) {
        if i == diag.len() {
            acc.push(diag.clone());
            return;
        }
        for t in 0..=left {
            diag[i] = t;
            diags(i + 1, left - t, diag, acc);
        }
    }
    let mut all_diags = Vec::new();
    diags(0, bound, &mut diag, &mut all_diags);
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    for d in all_diags {
        let mut g = vec![vec![0i64; n]; n];
        for i in 0..n {
            g[i][i] = 2 * d[i];
        }
        fill_offdiag(&pairs, 0, &d, &mut g, &mut out);
    }
    out.sort();
    out
}

fn fill_offdiag(
    pairs: &[(usize, usize)],
    k: usize,
    d: &[i64],
    g: &mut Vec<Vec<i64>>,
    out: &mut Vec<HalfIntegralMatrix>,
) {
    if k == pairs.len() {
        let t = HalfIntegralMatrix {
            n: g.len(),
            g: g.clone(),
        };
        if t.is_psd() {
            out.push(t);
        }
        return;
    }
    let (i, j) = pairs[k];
    // |2 t_ij| <= 2 sqrt(t_ii t_jj) <= t_ii + t_jj
    let b = d[i] + d[j];
    for v in -b..=b {
        if v * v > 4 * d[i] * d[j] {
            continue;
        }
        g[i][j] = v;
        g[j][i] = v;
        fill_offdiag(pairs, k + 1, d, g, out);
    }
    g[i][j] = 0;
    g[j][i] = 0;
}

/// Pseudorandom positive definite T of size n with small entries and |D| <= max_disc,
/// where D is the discriminant-type determinant used throughout (det 2T, halved for odd n).
pub fn random_positive_form(n: usize, max_disc: i128, seed: u64) -> HalfIntegralMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let mut g = vec![vec![0i64; n]; n];
        for i in 0..n {
            g[i][i] = 2 * rng.gen_range(1..=6);
            for j in 0..i {
                let x = rng.gen_range(-3..=3);
                g[i][j] = x;
                g[j][i] = x;
            }
        }
        let t = HalfIntegralMatrix { n, g };
        if !t.is_psd() || t.rank() < n {
            continue;
        }
        let d = t.det_doubled();
        let big_d = if n % 2 == 1 { d / 2 } else { d };
        if big_d.abs() <= max_disc {
            return t;
        }
    }
}
