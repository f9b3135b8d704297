//! Permutation statistics, length functions and their generating polynomials.

pub mod coxeter;
pub mod poly;

use std::collections::VecDeque;

use crate::basis::{Basis, DecompositionTable};
use crate::error::{Error, Result};
use crate::group::{ColoredPerm, ElementSet, GroupSpec};

pub use coxeter::{b_length, coxeter_generators_a, coxeter_generators_b, coxeter_generators_d, in_bplus, in_dn};
pub use poly::{q_integer, q_integer_factorization, q_product, QPolynomial};

fn require_plain(pi: &ColoredPerm) -> Result<()> {
    if pi.r() > 1 {
        return Err(Error::InvalidElement(format!("{pi} is colored (r = {}); expected a plain permutation", pi.r())));
    }
    Ok(())
}

/// Descent set `{i : π(i) > π(i+1)}`, 1-based.
pub fn des(pi: &ColoredPerm) -> Result<Vec<usize>> {
    require_plain(pi)?;
    Ok((1..pi.n()).filter(|&i| pi.image(i - 1) > pi.image(i)).collect())
}

/// Major index: the sum of the descents.
pub fn maj(pi: &ColoredPerm) -> Result<u64> {
    Ok(des(pi)?.iter().map(|&i| i as u64).sum())
}

/// Number of inversions, i.e. Coxeter length in `S_n`.
pub fn inv_length(pi: &ColoredPerm) -> Result<u64> {
    require_plain(pi)?;
    let n = pi.n();
    let mut count = 0;
    for i in 0..n {
        for j in i + 1..n {
            if pi.image(i) > pi.image(j) {
                count += 1;
            }
        }
    }
    Ok(count)
}

/// Flag major index of `g` against a validated basis.
pub fn fmaj(g: &ColoredPerm, table: &DecompositionTable) -> Result<u64> {
    table.fmaj(g).ok_or_else(|| Error::NotInGroup(g.to_string()))
}

/// `Σ_g q^{fmaj(g)}`, cross-checked against the closed form `Π [m_i]_q`.
pub fn fmaj_polynomial(basis: &Basis, table: &DecompositionTable, group: &ElementSet) -> Result<QPolynomial> {
    let summed = fmaj_polynomial_by_summation(table, group)?;
    let product = q_product(basis.moduli());
    if summed != product {
        return Err(Error::Inconsistent(format!(
            "Fmaj of {} by summation is {summed}, product formula gives {product}",
            basis.label()
        )));
    }
    Ok(summed)
}

pub fn fmaj_polynomial_by_summation(table: &DecompositionTable, group: &ElementSet) -> Result<QPolynomial> {
    let degrees = group.iter().map(|g| fmaj(g, table)).collect::<Result<Vec<_>>>()?;
    Ok(QPolynomial::from_degrees(degrees))
}

/// Word lengths, indexed like the group they were computed on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lengths(Vec<u32>);

impl Lengths {
    pub fn get(&self, index: usize) -> u32 {
        self.0[index]
    }

    pub fn of(&self, group: &ElementSet, g: &ColoredPerm) -> Option<u32> {
        group.index_of(g).map(|i| self.0[i])
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn max(&self) -> u32 {
        self.0.iter().copied().max().unwrap_or(0)
    }
}

/// Geodesic distance from the identity in the Cayley graph of `(group, gens)`.
///
/// `gens` is used verbatim: inverses are not added.
pub fn bfs_length(group: &ElementSet, gens: &[ColoredPerm]) -> Result<Lengths> {
    let (n, r) = group.shape().ok_or_else(|| Error::InvalidElement("empty group".into()))?;
    let id = ColoredPerm::identity(n, r);
    for s in gens {
        id.check_same_group(s)?;
        if !group.contains(s) {
            return Err(Error::GeneratorOutsideGroup(s.to_string()));
        }
    }
    let start = group.index_of(&id).ok_or_else(|| Error::NotInGroup(id.to_string()))?;
    const UNSEEN: u32 = u32::MAX;
    let mut dist = vec![UNSEEN; group.len()];
    dist[start] = 0;
    let mut queue = VecDeque::from([start]);
    while let Some(i) = queue.pop_front() {
        let x = group.get(i);
        for s in gens {
            let y = x.mul(s);
            let j = group.index_of(&y).ok_or_else(|| Error::Inconsistent(format!("{x} * {s} left the element set")))?;
            if dist[j] == UNSEEN {
                dist[j] = dist[i] + 1;
                queue.push_back(j);
            }
        }
    }
    let unreached = dist.iter().filter(|&&d| d == UNSEEN).count();
    if let Some(i) = dist.iter().position(|&d| d == UNSEEN) {
        return Err(Error::Unreached { witness: group.get(i).to_string(), unreached });
    }
    Ok(Lengths(dist))
}

/// `Σ_g q^{ℓ(g)}` for the length function of `gens`.
pub fn poincare_polynomial(group: &ElementSet, gens: &[ColoredPerm]) -> Result<QPolynomial> {
    let lengths = bfs_length(group, gens)?;
    Ok(QPolynomial::from_degrees(lengths.0.iter().map(|&d| d as u64)))
}

/// Degrees of the Hilbert series: `r, 2r, …, (n-1)r, nr/p`.
pub fn hilbert_degrees(spec: &GroupSpec) -> Vec<u64> {
    let r = spec.r as u64;
    let mut out: Vec<u64> = (1..spec.n as u64).map(|i| i * r).collect();
    out.push(spec.n as u64 * spec.r_over_p() as u64);
    out
}

/// `Hilb_{r,p,n}(q) = [r]_q [2r]_q ⋯ [(n-1)r]_q [nr/p]_q`.
pub fn hilbert_polynomial(spec: &GroupSpec) -> QPolynomial {
    q_product(&hilbert_degrees(spec))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::{sn_basis, validate_basis, weyl_basis, wreath_basis, WeylType};
    use crate::group::{enumerate_group, DEFAULT_CEILING};
    use crate::par::Execution;

    fn group(r: u32, p: u32, n: usize) -> ElementSet {
        enumerate_group(&GroupSpec::new(r, p, n).unwrap(), DEFAULT_CEILING).unwrap()
    }

    fn perm(s: &str) -> ColoredPerm {
        ColoredPerm::parse(s, 1).unwrap()
    }

    #[test]
    fn descent_statistics() {
        assert_eq!(des(&perm("[1,2,3]")).unwrap(), Vec::<usize>::new());
        assert_eq!(des(&perm("[3,2,1]")).unwrap(), vec![1, 2]);
        assert_eq!(maj(&perm("[1,2,3]")).unwrap(), 0);
        assert_eq!(maj(&perm("[3,2,1]")).unwrap(), 3);
        assert_eq!(inv_length(&perm("[1,2,3]")).unwrap(), 0);
        assert_eq!(inv_length(&perm("[3,2,1]")).unwrap(), 3);
        let colored = ColoredPerm::parse("[-1,2]", 2).unwrap();
        assert!(des(&colored).is_err());
        assert!(inv_length(&colored).is_err());
    }

    #[test]
    fn eulerian_numbers_s4() {
        let mut counts = [0u64; 4];
        for pi in &group(1, 1, 4) {
            counts[des(pi).unwrap().len()] += 1;
        }
        assert_eq!(counts, [1, 11, 11, 1]);
    }

    #[test]
    fn maj_is_mahonian_on_s3() {
        let s3 = group(1, 1, 3);
        let p = QPolynomial::from_degrees(s3.iter().map(|g| maj(g).unwrap()));
        assert_eq!(p, q_product(&[1, 2, 3]));
    }

    #[test]
    fn inversions_are_bfs_lengths_on_s5() {
        let s5 = group(1, 1, 5);
        let lengths = bfs_length(&s5, &coxeter_generators_a(5)).unwrap();
        for (i, pi) in s5.iter().enumerate() {
            assert_eq!(lengths.get(i) as u64, inv_length(pi).unwrap());
        }
    }

    #[test]
    fn bfs_examples() {
        let b2 = group(2, 1, 2);
        let lengths = bfs_length(&b2, &coxeter_generators_b(2)).unwrap();
        let id = ColoredPerm::identity(2, 2);
        assert_eq!(lengths.of(&b2, &id), Some(0));
        let longest = ColoredPerm::parse("[-1,-2]", 2).unwrap();
        assert_eq!(lengths.of(&b2, &longest), Some(4));
        assert_eq!(lengths.max(), 4);
    }

    #[test]
    fn bfs_errors() {
        let s3 = group(1, 1, 3);
        match bfs_length(&s3, &[perm("[2,1,3]")]) {
            Err(Error::Unreached { unreached, .. }) => assert_eq!(unreached, 4),
            other => panic!("expected Unreached, got {other:?}"),
        }
        let d2 = group(2, 2, 2);
        let s0 = ColoredPerm::parse("[-1,2]", 2).unwrap();
        assert!(matches!(bfs_length(&d2, &[s0]), Err(Error::GeneratorOutsideGroup(_))));
    }

    #[test]
    fn poincare_examples() {
        let trivial = group(1, 1, 1);
        assert!(poincare_polynomial(&trivial, &[]).unwrap().is_one());
        let s4 = group(1, 1, 4);
        assert_eq!(poincare_polynomial(&s4, &coxeter_generators_a(4)).unwrap(), q_product(&[2, 3, 4]));
        let b3 = group(2, 1, 3);
        assert_eq!(poincare_polynomial(&b3, &coxeter_generators_b(3)).unwrap(), q_product(&[2, 4, 6]));
        let d3 = group(2, 2, 3);
        assert_eq!(
            poincare_polynomial(&d3, &coxeter_generators_d(3)).unwrap(),
            poincare_polynomial(&s4, &coxeter_generators_a(4)).unwrap()
        );
    }

    #[test]
    fn closed_form_b_length_matches_bfs() {
        for n in 1..=4 {
            let b = group(2, 1, n);
            let lengths = bfs_length(&b, &coxeter_generators_b(n)).unwrap();
            for (i, w) in b.iter().enumerate() {
                assert_eq!(lengths.get(i) as u64, b_length(w));
            }
        }
    }

    #[test]
    fn hilbert_examples() {
        for n in 1..=5 {
            let expected = q_product(&(1..=n as u64).collect::<Vec<_>>());
            assert_eq!(hilbert_polynomial(&GroupSpec::new(1, 1, n).unwrap()), expected);
        }
        assert_eq!(hilbert_polynomial(&GroupSpec::new(2, 1, 2).unwrap()), q_product(&[2, 4]));
        assert_eq!(hilbert_polynomial(&GroupSpec::new(4, 2, 2).unwrap()), q_product(&[4, 4]));
        assert_eq!(
            q_integer_factorization(&hilbert_polynomial(&GroupSpec::new(9, 3, 3).unwrap())),
            Some(vec![9, 9, 18])
        );
    }

    #[test]
    fn fmaj_polynomials() {
        let s3 = group(1, 1, 3);
        let b = sn_basis(3);
        let t = validate_basis(&b, &s3, Execution::Sequential).unwrap();
        assert_eq!(fmaj_polynomial(&b, &t, &s3).unwrap(), QPolynomial::from_u64s(&[1, 2, 2, 1]));

        let b22 = group(2, 1, 2);
        let w = wreath_basis(2, 2);
        let t = validate_basis(&w, &b22, Execution::Sequential).unwrap();
        assert_eq!(fmaj_polynomial(&w, &t, &b22).unwrap(), QPolynomial::from_u64s(&[1, 2, 2, 2, 1]));

        let s1 = group(1, 1, 1);
        let e = sn_basis(1);
        let t = validate_basis(&e, &s1, Execution::Sequential).unwrap();
        assert!(fmaj_polynomial(&e, &t, &s1).unwrap().is_one());
    }

    #[test]
    fn t_basis_fmaj_is_maj() {
        for n in 1..=6 {
            let s = group(1, 1, n);
            let t = validate_basis(&sn_basis(n), &s, Execution::Auto).unwrap();
            for pi in &s {
                assert_eq!(fmaj(pi, &t).unwrap(), maj(pi).unwrap(), "{pi}");
            }
        }
    }

    #[test]
    fn fmaj_maximum_attained_once() {
        let spec = GroupSpec::new(4, 2, 3).unwrap();
        let g = group(4, 2, 3);
        let b = crate::basis::rpn_basis(&spec, Default::default()).unwrap();
        let t = validate_basis(&b, &g, Execution::Sequential).unwrap();
        let top: u64 = b.moduli().iter().map(|m| m - 1).sum();
        let hits = g.iter().filter(|x| fmaj(x, &t).unwrap() == top).count();
        assert_eq!(hits, 1);
        assert!(g.iter().all(|x| fmaj(x, &t).unwrap() <= top));
    }

    #[test]
    fn weyl_fmaj_equals_poincare() {
        let b3 = group(2, 1, 3);
        let b = weyl_basis(WeylType::B(3)).unwrap();
        let t = validate_basis(&b, &b3, Execution::Sequential).unwrap();
        assert_eq!(fmaj_polynomial(&b, &t, &b3).unwrap(), poincare_polynomial(&b3, &coxeter_generators_b(3)).unwrap());
    }
}
