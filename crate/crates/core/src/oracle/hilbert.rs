//! Hilbert bases of pointed cones and membership in finitely generated
//! monoids.

use std::collections::{BTreeSet, HashSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use super::cone::{dot, in_cone, Vector};
use super::OracleError;
use crate::linalg::{smith_normal_form, IntMatrix};

/// Default cap on search nodes for one membership query.
pub const DEFAULT_MEMBERSHIP_BUDGET: usize = 2_000_000;

fn subsets(m: usize, k: usize, f: &mut dyn FnMut(&[usize]) -> Result<(), OracleError>) -> Result<(), OracleError> {
    fn rec(
        start: usize,
        m: usize,
        k: usize,
        cur: &mut Vec<usize>,
        f: &mut dyn FnMut(&[usize]) -> Result<(), OracleError>,
    ) -> Result<(), OracleError> {
        if cur.len() == k {
            return f(cur);
        }
        for i in start..m {
            cur.push(i);
            rec(i + 1, m, k, cur, f)?;
            cur.pop();
        }
        Ok(())
    }
    rec(0, m, k, &mut Vec::new(), f)
}

/// Lattice points `Σ λ_i b_i` with `0 ≤ λ_i < 1`, where the columns `b_i`
/// of `basis` are linearly independent. Includes the origin.
fn parallelepiped_points(basis: &[Vector], dim: usize) -> Result<Vec<Vector>, OracleError> {
    // M has the basis vectors as columns.
    let mut m = IntMatrix::zeros(dim, dim);
    for (j, b) in basis.iter().enumerate() {
        for (i, &x) in b.iter().enumerate() {
            m.set(i, j, x);
        }
    }
    let det = m.determinant();
    let snf = smith_normal_form(&m);
    let d: Vec<i128> = (0..dim)
        .map(|i| snf.d.get(i, i).to_i128().ok_or(OracleError::Overflow))
        .collect::<Result<_, _>>()?;
    // Z^dim / M Z^dim ≅ ⊕ Z/d_i through x ↦ U x, so U^{-1} z runs over coset
    // representatives as z runs over the boxes 0 ≤ z_i < d_i.
    let u_inv = inverse_unimodular(&snf.u);
    let adj = adjugate(&m);
    let mut out = Vec::new();
    let mut z = vec![0i128; dim];
    loop {
        let x: Vec<BigInt> = (0..dim)
            .map(|i| (0..dim).map(|j| u_inv.get(i, j) * BigInt::from(z[j])).sum())
            .collect();
        // λ = adj(M) x / det; subtract M·floor(λ) to land in the parallelepiped.
        let floors: Vec<BigInt> = (0..dim)
            .map(|i| {
                let num: BigInt = (0..dim).map(|j| adj.get(i, j) * &x[j]).sum();
                num.div_floor(&det)
            })
            .collect();
        let point: Vector = (0..dim)
            .map(|i| {
                let shift: BigInt = (0..dim).map(|j| m.get(i, j) * &floors[j]).sum();
                (&x[i] - shift).to_i128().ok_or(OracleError::Overflow)
            })
            .collect::<Result<_, _>>()?;
        out.push(point);

        let mut i = 0;
        while i < dim {
            z[i] += 1;
            if z[i] < d[i] {
                break;
            }
            z[i] = 0;
            i += 1;
        }
        if i == dim {
            break;
        }
    }
    Ok(out)
}

fn adjugate(m: &IntMatrix) -> IntMatrix {
    let n = m.rows();
    let mut adj = IntMatrix::zeros(n, n);
    if n == 1 {
        adj.set(0, 0, 1);
        return adj;
    }
    for r in 0..n {
        for c in 0..n {
            let rows: Vec<Vec<BigInt>> = (0..n)
                .filter(|&i| i != r)
                .map(|i| (0..n).filter(|&j| j != c).map(|j| m.get(i, j).clone()).collect())
                .collect();
            let minor = IntMatrix::from_rows(n - 1, &rows).determinant();
            // adj(M)_{c,r} = (-1)^{r+c} minor(r, c)
            adj.set(c, r, if (r + c) % 2 == 0 { minor } else { -minor });
        }
    }
    adj
}

fn inverse_unimodular(u: &IntMatrix) -> IntMatrix {
    let det = u.determinant();
    let adj = adjugate(u);
    let mut inv = IntMatrix::zeros(u.rows(), u.cols());
    for i in 0..u.rows() {
        for j in 0..u.cols() {
            let x = adj.get(i, j) * &det; // det = ±1, so dividing equals multiplying
            inv.set(i, j, x);
        }
    }
    inv
}

/// The Hilbert basis of `cone ∩ Z^dim` for the pointed cone spanned by
/// `generators` (which span `Q^dim`) with inner facet normals `normals`.
///
/// Every lattice point of the cone lies in a simplicial cone on `dim`
/// independent generators and so is a parallelepiped point of that simplex
/// plus a nonnegative combination of its generators. Candidates are therefore
/// the generators and the parallelepiped points of all such simplices; the
/// irreducible candidates form the basis.
pub fn hilbert_basis(generators: &[Vector], normals: &[Vector], dim: usize) -> Result<Vec<Vector>, OracleError> {
    let mut candidates: BTreeSet<Vector> = generators
        .iter()
        .filter(|g| g.iter().any(|&x| x != 0))
        .cloned()
        .collect();
    subsets(generators.len(), dim, &mut |s| {
        let basis: Vec<Vector> = s.iter().map(|&i| generators[i].clone()).collect();
        let rows: Vec<Vector> = basis.clone();
        if IntMatrix::from_rows(dim, &rows).determinant() == BigInt::from(0) {
            return Ok(());
        }
        for p in parallelepiped_points(&basis, dim)? {
            if p.iter().any(|&x| x != 0) {
                candidates.insert(p);
            }
        }
        Ok(())
    })?;
    let candidates: Vec<Vector> = candidates.into_iter().collect();
    let mut basis = Vec::new();
    for x in &candidates {
        let mut reducible = false;
        for y in &candidates {
            if y == x {
                continue;
            }
            let diff: Vector = x.iter().zip(y).map(|(a, b)| a - b).collect();
            if in_cone(normals, &diff)? {
                reducible = true;
                break;
            }
        }
        if !reducible {
            basis.push(x.clone());
        }
    }
    Ok(basis)
}

/// A strictly positive grading on the pointed cone: the sum of the facet
/// normals.
pub fn grading(normals: &[Vector], dim: usize) -> Vector {
    let mut w = vec![0i128; dim];
    for n in normals {
        for (s, x) in w.iter_mut().zip(n) {
            *s += x;
        }
    }
    w
}

/// Decides whether `target` is a nonnegative integer combination of
/// `generators` by exhaustive search. Every generator has positive degree
/// under `grading`, so the search is finite; exceeding `budget` nodes is an
/// error rather than an answer.
pub fn is_member(
    target: &[i128],
    generators: &[Vector],
    normals: &[Vector],
    grading: &[i128],
    budget: usize,
) -> Result<bool, OracleError> {
    let gens: Vec<&Vector> = generators.iter().filter(|g| g.iter().any(|&x| x != 0)).collect();
    for g in &gens {
        if dot(grading, g)? <= 0 {
            return Err(OracleError::NotPointed);
        }
    }
    let mut failed: HashSet<(Vector, usize)> = HashSet::new();
    let mut nodes = 0usize;
    fn search(
        rest: &mut Vector,
        start: usize,
        gens: &[&Vector],
        normals: &[Vector],
        failed: &mut HashSet<(Vector, usize)>,
        nodes: &mut usize,
        budget: usize,
    ) -> Result<bool, OracleError> {
        if rest.iter().all(|&x| x == 0) {
            return Ok(true);
        }
        *nodes += 1;
        if *nodes > budget {
            return Err(OracleError::MembershipSolveBound { budget });
        }
        if !in_cone(normals, rest)? || failed.contains(&(rest.clone(), start)) {
            return Ok(false);
        }
        for (i, g) in gens.iter().enumerate().skip(start) {
            for (r, x) in rest.iter_mut().zip(g.iter()) {
                *r -= x;
            }
            let found = search(rest, i, gens, normals, failed, nodes, budget)?;
            for (r, x) in rest.iter_mut().zip(g.iter()) {
                *r += x;
            }
            if found {
                return Ok(true);
            }
        }
        failed.insert((rest.clone(), start));
        Ok(false)
    }
    let mut rest = target.to_vec();
    search(&mut rest, 0, &gens, normals, &mut failed, &mut nodes, budget)
}

#[cfg(test)]
mod tests {
    use super::super::cone::facets;
    use super::*;

    #[test]
    fn parallelepiped_of_quadric() {
        let pts = parallelepiped_points(&[vec![2, 0], vec![0, 2]], 2).unwrap();
        let mut pts = pts;
        pts.sort();
        assert_eq!(pts, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
    }

    #[test]
    fn hilbert_basis_of_a_cone_with_a_gap() {
        // cone over (1,0) and (1,3): Hilbert basis (1,0), (1,1), (1,2), (1,3)
        let g = vec![vec![1, 0], vec![1, 3]];
        let f = facets(&g, 2).unwrap();
        let h = hilbert_basis(&g, &f.normals, 2).unwrap();
        assert_eq!(h, vec![vec![1, 0], vec![1, 1], vec![1, 2], vec![1, 3]]);
        let w = grading(&f.normals, 2);
        assert!(!is_member(&[1, 1], &g, &f.normals, &w, 1000).unwrap());
        assert!(is_member(&[3, 3], &g, &f.normals, &w, 1000).unwrap());
    }

    #[test]
    fn free_cone() {
        let g = vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]];
        let f = facets(&g, 3).unwrap();
        assert_eq!(
            hilbert_basis(&g, &f.normals, 3).unwrap(),
            vec![vec![0, 0, 1], vec![0, 1, 0], vec![1, 0, 0]]
        );
    }

    #[test]
    fn budget_exhaustion_is_an_error() {
        let g = vec![vec![1, 0], vec![1, 1]];
        let f = facets(&g, 2).unwrap();
        let w = grading(&f.normals, 2);
        assert!(matches!(
            is_member(&[40, 20], &g, &f.normals, &w, 3),
            Err(OracleError::MembershipSolveBound { .. })
        ));
    }
}
