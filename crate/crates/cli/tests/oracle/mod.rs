//! Brute-force dense model of `H(g_K, l_Δ)` for `sl3`, full flag, `K = {α1}`.
//!
//! Everything is rebuilt from 3×3 matrices: the structure constants, the
//! subalgebra of `sl3 × sl3`, every cochain space on all subsets, relative
//! cochains as a kernel, and ranks by plain Gaussian elimination. Nothing
//! here calls into the engine.

#![allow(clippy::needless_range_loop)]

use num_rational::BigRational;
use num_traits::{One, Zero};

pub type Q = BigRational;

fn q(n: i64) -> Q {
    Q::from_integer(n.into())
}

type Mat3 = [[i64; 3]; 3];

fn e(i: usize, j: usize) -> Mat3 {
    let mut m = [[0; 3]; 3];
    m[i][j] = 1;
    m
}

fn comm(a: &Mat3, b: &Mat3) -> Mat3 {
    let mut out = [[0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                out[i][j] += a[i][k] * b[k][j] - b[i][k] * a[k][j];
            }
        }
    }
    out
}

/// Basis `h1, h2, E12, E23, E13, E21, E32, E31`.
fn sl3_basis() -> Vec<Mat3> {
    let mut h1 = [[0; 3]; 3];
    h1[0][0] = 1;
    h1[1][1] = -1;
    let mut h2 = [[0; 3]; 3];
    h2[1][1] = 1;
    h2[2][2] = -1;
    vec![h1, h2, e(0, 1), e(1, 2), e(0, 2), e(1, 0), e(2, 1), e(2, 0)]
}

fn sl3_coords(m: &Mat3) -> Vec<Q> {
    // a11 = c1, a22 = c2 - c1.
    let c1 = m[0][0];
    let c2 = m[0][0] + m[1][1];
    [c1, c2, m[0][1], m[1][2], m[0][2], m[1][0], m[2][1], m[2][0]].iter().map(|&x| q(x)).collect()
}

/// Structure constants `c[i][j][k]`.
pub struct Algebra {
    pub n: usize,
    pub c: Vec<Vec<Vec<Q>>>,
}

fn sl3() -> Algebra {
    let b = sl3_basis();
    let c = b.iter().map(|x| b.iter().map(|y| sl3_coords(&comm(x, y))).collect()).collect();
    Algebra { n: 8, c }
}

/// Dense column-space utilities over ℚ.
pub fn rank(cols: &[Vec<Q>]) -> usize {
    if cols.is_empty() {
        return 0;
    }
    let rows = cols[0].len();
    let mut m: Vec<Vec<Q>> = cols.to_vec();
    let mut r = 0;
    for i in 0..rows {
        let Some(p) = (r..m.len()).find(|&k| !m[k][i].is_zero()) else { continue };
        m.swap(r, p);
        let piv = m[r][i].clone();
        for k in 0..m.len() {
            if k != r && !m[k][i].is_zero() {
                let f = &m[k][i] / &piv;
                for t in i..rows {
                    let v = &m[r][t] * &f;
                    m[k][t] -= v;
                }
            }
        }
        r += 1;
    }
    r
}

/// Kernel of the map whose columns are `cols` (vectors in `ℚ^{cols.len()}`).
pub fn kernel(cols: &[Vec<Q>], rows: usize) -> Vec<Vec<Q>> {
    let n = cols.len();
    // Row-reduce the rows × n matrix.
    let mut a: Vec<Vec<Q>> = (0..rows).map(|i| (0..n).map(|j| cols[j][i].clone()).collect()).collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for j in 0..n {
        let Some(p) = (r..rows).find(|&i| !a[i][j].is_zero()) else { continue };
        a.swap(r, p);
        let inv = Q::one() / &a[r][j];
        for t in 0..n {
            a[r][t] = &a[r][t] * &inv;
        }
        for i in 0..rows {
            if i != r && !a[i][j].is_zero() {
                let f = a[i][j].clone();
                for t in 0..n {
                    let v = &a[r][t] * &f;
                    a[i][t] -= v;
                }
            }
        }
        pivots.push(j);
        r += 1;
    }
    (0..n)
        .filter(|j| !pivots.contains(j))
        .map(|free| {
            let mut v = vec![Q::zero(); n];
            v[free] = Q::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -a[row][free].clone();
            }
            v
        })
        .collect()
}

fn combine(cols: &[Vec<Q>], coeffs: &[Q], rows: usize) -> Vec<Q> {
    let mut out = vec![Q::zero(); rows];
    for (c, x) in cols.iter().zip(coeffs) {
        if !x.is_zero() {
            for (o, v) in out.iter_mut().zip(c) {
                *o += v * x;
            }
        }
    }
    out
}

/// The subalgebra spanned by `vecs` (coordinates in `alg`), in that basis.
fn restrict(alg: &Algebra, vecs: &[Vec<Q>]) -> Algebra {
    let m = vecs.len();
    let bracket = |x: &[Q], y: &[Q]| {
        let mut out = vec![Q::zero(); alg.n];
        for i in 0..alg.n {
            for j in 0..alg.n {
                if x[i].is_zero() || y[j].is_zero() {
                    continue;
                }
                for k in 0..alg.n {
                    out[k] += &x[i] * &y[j] * &alg.c[i][j][k];
                }
            }
        }
        out
    };
    let solve = |v: Vec<Q>| -> Vec<Q> {
        let mut cols = vecs.to_vec();
        cols.push(v);
        let ker = kernel(&cols, alg.n);
        let k = ker.iter().find(|k| !k[m].is_zero()).expect("closed under brackets");
        let s = -Q::one() / &k[m];
        k[..m].iter().map(|x| x * &s).collect()
    };
    let c = (0..m).map(|i| (0..m).map(|j| solve(bracket(&vecs[i], &vecs[j]))).collect()).collect();
    Algebra { n: m, c }
}

fn direct_sum(a: &Algebra) -> Algebra {
    let n = 2 * a.n;
    let mut c = vec![vec![vec![Q::zero(); n]; n]; n];
    for i in 0..a.n {
        for j in 0..a.n {
            for k in 0..a.n {
                c[i][j][k] = a.c[i][j][k].clone();
                c[a.n + i][a.n + j][a.n + k] = a.c[i][j][k].clone();
            }
        }
    }
    Algebra { n, c }
}

fn subsets(n: usize, k: usize) -> Vec<u64> {
    (0u64..1 << n).filter(|m| m.count_ones() as usize == k).collect()
}

fn sign_before(mask: u64, i: usize) -> i64 {
    if (mask & ((1u64 << i) - 1)).count_ones().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Cochains with trivial coefficients on all subsets of the basis.
pub struct Complex {
    pub alg: Algebra,
    pub masks: Vec<Vec<u64>>,
}

impl Complex {
    pub fn new(alg: Algebra) -> Self {
        let masks = (0..=alg.n).map(|k| subsets(alg.n, k)).collect();
        Complex { alg, masks }
    }

    pub fn dim(&self, n: usize) -> usize {
        self.masks.get(n).map_or(0, Vec::len)
    }

    fn pos(&self, n: usize, mask: u64) -> usize {
        self.masks[n].binary_search(&mask).expect("mask of the right size")
    }

    /// `(df)(x_0..x_n) = Σ_{i<j} (−1)^{i+j} f([x_i, x_j], x_0..x̂_i..x̂_j..x_n)`.
    pub fn d(&self, n: usize, f: &[Q]) -> Vec<Q> {
        let mut out = vec![Q::zero(); self.dim(n + 1)];
        if n >= self.alg.n {
            return out;
        }
        for (si, &s) in self.masks[n + 1].iter().enumerate() {
            let xs: Vec<usize> = (0..self.alg.n).filter(|b| s >> b & 1 == 1).collect();
            for i in 0..xs.len() {
                for j in i + 1..xs.len() {
                    let rest = s & !(1 << xs[i]) & !(1 << xs[j]);
                    for k in 0..self.alg.n {
                        let c = &self.alg.c[xs[i]][xs[j]][k];
                        if c.is_zero() || rest >> k & 1 == 1 {
                            continue;
                        }
                        let m = rest | 1 << k;
                        let sgn = if (i + j) % 2 == 0 { 1 } else { -1 } * sign_before(rest, k);
                        out[si] += c * &f[self.pos(n, m)] * q(sgn);
                    }
                }
            }
        }
        out
    }

    /// `(θ_x f)(x_1..x_n) = −Σ_i f(x_1..[x, x_i]..x_n)`.
    pub fn theta(&self, x: usize, n: usize, f: &[Q]) -> Vec<Q> {
        let mut out = vec![Q::zero(); self.dim(n)];
        for (si, &s) in self.masks[n].iter().enumerate() {
            for i in (0..self.alg.n).filter(|b| s >> b & 1 == 1) {
                let rest = s & !(1 << i);
                for k in 0..self.alg.n {
                    let c = &self.alg.c[x][i][k];
                    if c.is_zero() || rest >> k & 1 == 1 {
                        continue;
                    }
                    // Replace x_i by x_k in place: sign from moving k to its sorted slot.
                    let sgn = sign_before(rest, i) * sign_before(rest, k);
                    out[si] -= c * &f[self.pos(n, rest | 1 << k)] * q(sgn);
                }
            }
        }
        out
    }

    /// Wedge of basis-coordinate cochains.
    pub fn wedge(&self, p: usize, a: &[Q], r: usize, b: &[Q]) -> Vec<Q> {
        let mut out = vec![Q::zero(); self.dim(p + r)];
        for (i, &ma) in self.masks[p].iter().enumerate() {
            if a[i].is_zero() {
                continue;
            }
            for (j, &mb) in self.masks[r].iter().enumerate() {
                if b[j].is_zero() || ma & mb != 0 {
                    continue;
                }
                let inversions: u32 = (0..self.alg.n).filter(|&t| mb >> t & 1 == 1).map(|t| (ma >> t).count_ones()).sum();
                let sgn = if inversions.is_multiple_of(2) { 1 } else { -1 };
                out[self.pos(p + r, ma | mb)] += &a[i] * &b[j] * q(sgn);
            }
        }
        out
    }
}

fn unit(n: usize, i: usize) -> Vec<Q> {
    (0..n).map(|j| if i == j { Q::one() } else { Q::zero() }).collect()
}

fn units(n: usize) -> Vec<Vec<Q>> {
    (0..n).map(|i| unit(n, i)).collect()
}

/// Basis of the relative cochains `C^n(g, k)` for `k` spanned by basis vectors.
pub fn relative(cx: &Complex, k: &[usize], n: usize) -> Vec<Vec<Q>> {
    relative_supported(cx, k, n, !0)
}

pub struct Oracle {
    pub betti: Vec<usize>,
    pub subalgebra: Vec<usize>,
    pub ideal: Vec<usize>,
    pub quotient: Vec<usize>,
    pub ker_i_star: Vec<usize>,
    /// `(A⁺)^n ⊆ ker i*^n` in every degree.
    pub ideal_in_kernel: bool,
}

/// Cohomological data for `sl3`, full flag, support `{1}`.
pub fn a2_full_flag_t1() -> Oracle {
    let g = sl3();
    let prod = direct_sum(&g);
    let unit16 = |i: usize| -> Vec<Q> { (0..16).map(|j| if j == i { Q::one() } else { Q::zero() }).collect() };
    let diag = |i: usize| -> Vec<Q> { (0..16).map(|j| if j == i || j == 8 + i { Q::one() } else { Q::zero() }).collect() };
    // ũ_K: (f_ξ, 0) and (0, e_ξ) for ξ ∈ {α2, α1+α2}; then diagonal h1, h2, e_α1, f_α1.
    let (e_a2, e_a12, f_a2, f_a12) = (3, 4, 6, 7);
    let vecs = vec![
        unit16(f_a2),
        unit16(f_a12),
        unit16(8 + e_a2),
        unit16(8 + e_a12),
        diag(0),
        diag(1),
        diag(2),
        diag(5),
    ];
    let gk = restrict(&prod, &vecs);
    let cx = Complex::new(gk);
    let k = [4usize, 5];
    let top = 8;

    let rel: Vec<Vec<Vec<Q>>> = (0..=top).map(|n| relative(&cx, &k, n)).collect();
    let cocycles: Vec<Vec<Vec<Q>>> = (0..=top)
        .map(|n| {
            let dims = cx.dim(n + 1);
            let images: Vec<Vec<Q>> = rel[n].iter().map(|v| cx.d(n, v)).collect();
            kernel(&images, dims).iter().map(|c| combine(&rel[n], c, cx.dim(n))).collect()
        })
        .collect();
    let boundaries: Vec<Vec<Vec<Q>>> =
        (0..=top).map(|n| if n == 0 { Vec::new() } else { rel[n - 1].iter().map(|v| cx.d(n - 1, v)).collect() }).collect();
    let b_rank: Vec<usize> = boundaries.iter().map(|b| rank(b)).collect();
    let betti: Vec<usize> = (0..=top).map(|n| cocycles[n].len() - b_rank[n]).collect();

    // Pullbacks of relative cocycles of l_K: cochains supported on the diagonal block.
    let lmask: u64 = 0b1111_0000;
    let sub_cocycles: Vec<Vec<Vec<Q>>> = (0..=top)
        .map(|n| {
            let all = relative_supported(&cx, &k, n, lmask);
            let images: Vec<Vec<Q>> = all.iter().map(|v| cx.d(n, v)).collect();
            kernel(&images, cx.dim(n + 1)).iter().map(|c| combine(&all, c, cx.dim(n))).collect()
        })
        .collect();
    let span_dim = |a: &[Vec<Q>], b: &[Vec<Q>]| rank(&[a, b].concat());
    let subalgebra: Vec<usize> = (0..=top).map(|n| span_dim(&sub_cocycles[n], &boundaries[n]) - b_rank[n]).collect();

    // (A⁺)^n spanned by a ∧ h with a ∈ A^p, p > 0, h a relative cocycle.
    let products: Vec<Vec<Vec<Q>>> = (0..=top)
        .map(|n| {
            let mut out = Vec::new();
            for p in 1..=n {
                for a in &sub_cocycles[p] {
                    for h in &cocycles[n - p] {
                        out.push(cx.wedge(p, a, n - p, h));
                    }
                }
            }
            out
        })
        .collect();
    let ideal: Vec<usize> = (0..=top).map(|n| span_dim(&products[n], &boundaries[n]) - b_rank[n]).collect();
    let quotient: Vec<usize> = (0..=top).map(|n| betti[n] - ideal[n]).collect();

    // i*: restriction to ũ (first four basis vectors), absolute cohomology of ũ.
    let umask: u64 = 0b1111;
    let u_alg = Algebra {
        n: 4,
        c: (0..4).map(|i| (0..4).map(|j| cx.alg.c[i][j][..4].to_vec()).collect()).collect(),
    };
    let ucx = Complex::new(u_alg);
    let restrict_to_u = |n: usize, v: &[Q]| -> Vec<Q> {
        let mut out = vec![Q::zero(); ucx.dim(n)];
        for (x, &m) in v.iter().zip(&cx.masks[n]) {
            if m & !umask == 0 && !x.is_zero() {
                out[ucx.pos(n, m)] = x.clone();
            }
        }
        out
    };
    let mut ker_i_star = Vec::new();
    let mut ideal_in_kernel = true;
    for n in 0..=top {
        if n > 4 {
            ker_i_star.push(betti[n]);
            continue;
        }
        let u_bound: Vec<Vec<Q>> = if n == 0 { Vec::new() } else { units(ucx.dim(n - 1)).iter().map(|v| ucx.d(n - 1, v)).collect() };
        let ub_rank = rank(&u_bound);
        let restricted: Vec<Vec<Q>> = cocycles[n].iter().map(|z| restrict_to_u(n, z)).collect();
        // dim{z : res z ∈ B(ũ)} = dim Z − (rank [res Z | B(ũ)] − rank B(ũ)).
        let kdim = cocycles[n].len() - (span_dim(&restricted, &u_bound) - ub_rank);
        ker_i_star.push(kdim - b_rank[n]);
        for p in &products[n] {
            let r = restrict_to_u(n, p);
            if span_dim(&[r], &u_bound) != ub_rank {
                ideal_in_kernel = false;
            }
        }
    }
    Oracle { betti, subalgebra, ideal, quotient, ker_i_star, ideal_in_kernel }
}

/// Relative cochains supported on subsets of `support`.
fn relative_supported(cx: &Complex, k: &[usize], n: usize, support: u64) -> Vec<Vec<Q>> {
    let dim = cx.dim(n);
    let kmask: u64 = k.iter().map(|&i| 1u64 << i).sum();
    let basis: Vec<Vec<Q>> = (0..dim)
        .filter(|&i| cx.masks[n][i] & kmask == 0 && cx.masks[n][i] & !support == 0)
        .map(|i| unit(dim, i))
        .collect();
    // θ_x-invariants among cochains vanishing on k.
    let rows: Vec<Vec<Q>> = basis.iter().map(|v| k.iter().flat_map(|&x| cx.theta(x, n, v)).collect()).collect();
    kernel(&rows, k.len() * dim).iter().map(|c| combine(&basis, c, dim)).collect()
}
