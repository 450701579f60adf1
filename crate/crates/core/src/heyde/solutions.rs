//! Subgroups E of the dual whose indicator, taken as μ̂1 = μ̂2 = 1_E, solves
//! the functional equation.
//!
//! Indicators of E = ⊕_p E_p factor over primary components, and so does
//! the equation (set all other components of u and v to zero), so the scan
//! runs per prime and the solutions are assembled as direct sums.

use crate::error::Result;
use crate::group::{FiniteAbelianGroup, Subgroup};
use crate::morphism::{check_heyde_admissible, Homomorphism};

#[derive(Clone, Debug)]
pub struct ZeroOneReport {
    /// Solutions sorted by order, then by element set.
    pub solutions: Vec<Subgroup>,
    /// Odd order and α admissible.
    pub hypotheses_met: bool,
    /// Every solution satisfies α̃(E) = E.
    pub all_invariant: bool,
    /// Number of candidate subgroups examined across the components.
    pub subgroups_scanned: usize,
}

/// A primary component as its own group, with the positions of its factors.
pub(crate) struct Component {
    pub group: FiniteAbelianGroup,
    pub factors: Vec<usize>,
}

pub(crate) fn primary_components(g: &FiniteAbelianGroup) -> Result<Vec<Component>> {
    let mut out = Vec::new();
    for p in g.primes() {
        let factors: Vec<usize> = (0..g.rank()).filter(|&i| g.orders()[i].is_multiple_of(p)).collect();
        let orders: Vec<i64> = factors.iter().map(|&i| g.orders()[i] as i64).collect();
        out.push(Component { group: FiniteAbelianGroup::new(&orders)?, factors });
    }
    Ok(out)
}

/// The diagonal block of an endomorphism on one primary component.
pub(crate) fn block(alpha: &Homomorphism, c: &Component) -> Result<Homomorphism> {
    let m: Vec<Vec<i64>> =
        c.factors.iter().map(|&i| c.factors.iter().map(|&j| alpha.matrix()[i][j] as i64).collect()).collect();
    Homomorphism::new(&m, &c.group, &c.group)
}

/// Does 1_E solve the equation for the dual map with index table `adj`?
pub(crate) fn indicator_solves(h: &FiniteAbelianGroup, mask: &[bool], adj: &[usize]) -> bool {
    let n = h.order() as usize;
    for u in 0..n {
        for v in 0..n {
            let nv = h.neg_idx(v);
            if nv <= v {
                continue;
            }
            let lhs = mask[h.add_idx(u, v)] && mask[h.add_idx(u, adj[v])];
            let rhs = mask[h.add_idx(u, nv)] && mask[h.add_idx(u, adj[nv])];
            if lhs != rhs {
                return false;
            }
        }
    }
    true
}

/// Brute force over every subgroup of `h`.
pub(crate) fn solutions_direct(
    h: &FiniteAbelianGroup,
    alpha: &Homomorphism,
    cap: u64,
) -> Result<(Vec<Subgroup>, usize)> {
    let adj = alpha.adjoint().table();
    let subs = h.enumerate_subgroups(cap)?;
    let scanned = subs.len();
    Ok((subs.into_iter().filter(|e| indicator_solves(h, e.mask(), &adj)).collect(), scanned))
}

pub fn enumerate_zero_one_solutions(g: &FiniteAbelianGroup, alpha: &Homomorphism, cap: u64) -> Result<ZeroOneReport> {
    g.same_as(alpha.domain())?;
    let comps = primary_components(g)?;
    let mut per_prime = Vec::with_capacity(comps.len());
    let mut scanned = 0;
    for c in &comps {
        let (sols, n) = solutions_direct(&c.group, &block(alpha, c)?, cap)?;
        scanned += n;
        per_prime.push(sols);
    }
    // Direct sums: component indices combine in mixed radix, first prime
    // most significant.
    let mut combos: Vec<Vec<usize>> = vec![vec![0]];
    let mut radix = 1usize;
    for (c, sols) in comps.iter().zip(&per_prime).rev() {
        let mut next = Vec::new();
        for members in &combos {
            for e in sols {
                let mut m = Vec::with_capacity(members.len() * e.order() as usize);
                for &a in e.member_indices() {
                    for &b in members {
                        m.push(a * radix + b);
                    }
                }
                next.push(m);
            }
        }
        combos = next;
        radix *= c.group.order() as usize;
    }
    let mut solutions: Vec<Subgroup> = combos.into_iter().map(|m| Subgroup::from_members(g, m, vec![])).collect();
    solutions.sort_by(|a, b| (a.order(), a.member_indices()).cmp(&(b.order(), b.member_indices())));
    let adj = alpha.adjoint();
    let all_invariant = solutions.iter().all(|e| adj.image_of(e).map(|i| i == *e).unwrap_or(false));
    Ok(ZeroOneReport {
        solutions,
        hypotheses_met: g.has_odd_order() && check_heyde_admissible(alpha),
        all_invariant,
        subgroups_scanned: scanned,
    })
}
