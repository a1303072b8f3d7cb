//! Breadth-first enumeration of the superlattices L of Z^r on which the additive character
//! of a half-integral form is trivial, graded by log_l [L : Z^r].
//!
//! A lattice is stored through the row Hermite normal form K of an integer matrix with
//! L = Z^r K^-1, packed as its upper triangle. Children are A K for the index-l matrices A
//! in Hermite form; since both are upper triangular, only the above-diagonal reduction
//! is needed to renormalize.

use std::collections::BTreeMap;

use rayon::prelude::*;

pub(crate) const MAX_RANK: usize = 4;
const PACK: usize = MAX_RANK * (MAX_RANK + 1) / 2;

type Dense = [[i128; MAX_RANK]; MAX_RANK];

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct Packed([i64; PACK]);

fn offset(r: usize, i: usize) -> usize {
    i * r - i * i.saturating_sub(1) / 2
}

fn unpack(r: usize, p: &Packed) -> Dense {
    let mut d = [[0i128; MAX_RANK]; MAX_RANK];
    for i in 0..r {
        let o = offset(r, i);
        for j in i..r {
            d[i][j] = i128::from(p.0[o + j - i]);
        }
    }
    d
}

fn pack(r: usize, d: &Dense) -> Packed {
    let mut p = [0i64; PACK];
    for i in 0..r {
        let o = offset(r, i);
        for j in i..r {
            p[o + j - i] = i64::try_from(d[i][j]).expect("lattice entry fits in i64");
        }
    }
    Packed(p)
}

/// Index-l step: row i is scaled by l and rows above receive a[s] times the old row i.
struct Step {
    i: usize,
    a: [i128; MAX_RANK],
}

fn steps(r: usize, l: u64) -> Vec<Step> {
    let mut out = Vec::new();
    for i in 0..r {
        for mut idx in 0..l.pow(i as u32) {
            let mut a = [0i128; MAX_RANK];
            for slot in a.iter_mut().take(i) {
                *slot = i128::from(idx % l);
                idx /= l;
            }
            out.push(Step { i, a });
        }
    }
    out
}

fn child(r: usize, l: i128, k: &Dense, st: &Step) -> Dense {
    let mut d = *k;
    let row_i = k[st.i];
    for s in 0..st.i {
        for c in 0..r {
            d[s][c] += st.a[s] * row_i[c];
        }
    }
    for c in 0..r {
        d[st.i][c] *= l;
    }
    for c in 0..r {
        let piv = d[c][c];
        for s in 0..c {
            let q = d[s][c].div_euclid(piv);
            if q != 0 {
                for x in c..r {
                    d[s][x] -= q * d[c][x];
                }
            }
        }
    }
    d
}

fn val(mut x: i128, l: i128) -> u32 {
    let mut v = 0;
    while x % l == 0 {
        x /= l;
        v += 1;
    }
    v
}

/// Smith form of a nonsingular r x r matrix: returns the l-adic valuations of the
/// elementary divisors and the right transform R (columns), with U K R diagonal.
fn smith_right(r: usize, l: i128, k: &Dense) -> ([u32; MAX_RANK], Dense) {
    let mut d = *k;
    let mut rt = [[0i128; MAX_RANK]; MAX_RANK];
    for (i, row) in rt.iter_mut().enumerate().take(r) {
        row[i] = 1;
    }
    for t in 0..r {
        loop {
            let mut best = (usize::MAX, usize::MAX);
            let mut bestv = i128::MAX;
            for i in t..r {
                for j in t..r {
                    let a = d[i][j].abs();
                    if a != 0 && a < bestv {
                        bestv = a;
                        best = (i, j);
                    }
                }
            }
            let (pi, pj) = best;
            d.swap(t, pi);
            if pj != t {
                for row in d.iter_mut().take(r) {
                    row.swap(t, pj);
                }
                for row in rt.iter_mut().take(r) {
                    row.swap(t, pj);
                }
            }
            let piv = d[t][t];
            let mut clean = true;
            for i in t + 1..r {
                let q = d[i][t].div_euclid(piv);
                if q != 0 {
                    for c in t..r {
                        d[i][c] -= q * d[t][c];
                    }
                }
                clean &= d[i][t] == 0;
            }
            for j in t + 1..r {
                let q = d[t][j].div_euclid(piv);
                if q != 0 {
                    for row in d.iter_mut().take(r) {
                        row[j] -= q * row[t];
                    }
                    for row in rt.iter_mut().take(r) {
                        row[j] -= q * row[t];
                    }
                }
                clean &= d[t][j] == 0;
            }
            if !clean {
                continue;
            }
            match (t + 1..r).find(|&i| (t + 1..r).any(|j| d[i][j] % piv != 0)) {
                Some(i) => {
                    for c in 0..r {
                        d[t][c] += d[i][c];
                    }
                }
                None => break,
            }
        }
    }
    let mut ks = [0u32; MAX_RANK];
    for (t, k) in ks.iter_mut().enumerate().take(r) {
        *k = val(d[t][t], l);
    }
    (ks, rt)
}

/// log_l of |{S : K S integral}| if tr(TS) is integral on that group, None otherwise.
/// In the Smith basis the group is {S' : l^{min(k_i, k_j)} s'_ij integral} and the form
/// becomes G' = R^t G R.
fn weight(r: usize, l: i128, g: &Dense, k: &Dense) -> Option<u32> {
    let (ks, rt) = smith_right(r, l, k);
    let mut gr = [[0i128; MAX_RANK]; MAX_RANK];
    for i in 0..r {
        for j in 0..r {
            gr[i][j] = (0..r).map(|s| g[i][s] * rt[s][j]).sum();
        }
    }
    let mut w = 0;
    for i in 0..r {
        for j in i..r {
            let gij: i128 = (0..r).map(|s| rt[s][i] * gr[s][j]).sum();
            let e = ks[i].min(ks[j]);
            let need = if i == j && l == 2 { e + 1 } else { e };
            if gij.rem_euclid(l.pow(need)) != 0 {
                return None;
            }
            w += e;
        }
    }
    Some(w)
}

/// For each level j = 0..=levels, the multiset of weights log_l g(L) over good lattices
/// of index l^j, as a map weight -> count.
pub(crate) fn good_lattice_weights(g: &[Vec<i128>], l: u64, levels: usize) -> Vec<BTreeMap<u32, u64>> {
    let r = g.len();
    assert!(r <= MAX_RANK, "lattice search supports rank up to {MAX_RANK}");
    let li = i128::from(l);
    let mut gd = [[0i128; MAX_RANK]; MAX_RANK];
    for i in 0..r {
        for j in 0..r {
            gd[i][j] = g[i][j];
        }
    }
    let st = steps(r, l);
    let mut ident = [[0i128; MAX_RANK]; MAX_RANK];
    for (i, row) in ident.iter_mut().enumerate().take(r) {
        row[i] = 1;
    }
    let mut level = vec![pack(r, &ident)];
    let mut out = vec![BTreeMap::from([(0u32, 1u64)])];
    while out.len() <= levels {
        let mut found: Vec<(Packed, u32)> = level
            .par_iter()
            .flat_map_iter(|p| {
                let k = unpack(r, p);
                st.iter().filter_map(move |s| {
                    let c = child(r, li, &k, s);
                    weight(r, li, &gd, &c).map(|w| (pack(r, &c), w))
                })
            })
            .collect();
        found.par_sort_unstable();
        found.dedup();
        let mut counts = BTreeMap::new();
        for (_, w) in &found {
            *counts.entry(*w).or_insert(0u64) += 1;
        }
        out.push(counts);
        if out.len() > levels {
            break;
        }
        level = found.into_iter().map(|(p, _)| p).collect();
    }
    out
}
