use super::cochain::Cochain;
use super::frame::Frame;
use super::ops::{iota, CeOperators};
use crate::linalg::SparseVec;
use crate::sample::sample_indices;

fn basis_cochains(ops: &CeOperators, n: usize, limit: usize, seed: u64) -> Vec<Cochain> {
    let all: Vec<usize> = (0..ops.algebra().dim()).collect();
    let frame = Frame::new(ops.algebra().dim(), &all, n, ops.module().dim());
    sample_indices(frame.len(), limit, seed.wrapping_add(n as u64))
        .into_iter()
        .map(|i| Cochain::from_coords(&frame, &SparseVec::unit(i)))
        .collect()
}

/// `d(d f) = 0` on basis cochains of every degree, at most `limit` per degree.
pub fn square_zero_failures(ops: &CeOperators, limit: usize, seed: u64) -> Vec<String> {
    let mut out = Vec::new();
    for n in 0..=ops.algebra().dim() {
        for f in basis_cochains(ops, n, limit, seed) {
            if !ops.differential(&ops.differential(&f)).is_zero() {
                out.push(format!("d∘d ≠ 0 on a basis cochain of degree {n}: {:?}", f.support()));
            }
        }
    }
    out
}

/// `θ_z = d i_z + i_z d` for every basis vector `z` on basis cochains, at most
/// `limit` per degree.
pub fn cartan_failures(ops: &CeOperators, limit: usize, seed: u64) -> Vec<String> {
    let mut out = Vec::new();
    let dim = ops.algebra().dim();
    for n in 0..=dim {
        for f in basis_cochains(ops, n, limit, seed) {
            for x in 0..dim {
                let z = SparseVec::unit(x);
                if ops.theta(&z, &f) != ops.cartan_rhs(&z, &f) {
                    out.push(format!("θ_{x} ≠ d i + i d on a basis cochain of degree {n}: {:?}", f.support()));
                }
            }
        }
    }
    out
}

/// `i_z i_w = −i_w i_z` on basis cochains of degree ≥ 2.
pub fn contraction_failures(ops: &CeOperators, limit: usize, seed: u64) -> Vec<String> {
    let mut out = Vec::new();
    let dim = ops.algebra().dim();
    for n in 2..=dim {
        for f in basis_cochains(ops, n, limit, seed) {
            for x in 0..dim {
                for y in x..dim {
                    let (zx, zy) = (SparseVec::unit(x), SparseVec::unit(y));
                    if !iota(&zx, &iota(&zy, &f)).add(&iota(&zy, &iota(&zx, &f))).is_zero() {
                        out.push(format!("i_{x} i_{y} + i_{y} i_{x} ≠ 0 in degree {n}"));
                    }
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::{LieAlgebraData, LieModuleData};

    #[test]
    fn sl2_adjoint_identities() {
        let g = LieAlgebraData::sl2();
        let ops = CeOperators::new(&g, &LieModuleData::adjoint(&g)).unwrap();
        assert!(square_zero_failures(&ops, usize::MAX, 0).is_empty());
        assert!(cartan_failures(&ops, usize::MAX, 0).is_empty());
        assert!(contraction_failures(&ops, usize::MAX, 0).is_empty());
    }
}
