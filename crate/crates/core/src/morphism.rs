//! Homomorphisms between finite abelian groups as congruence-constrained
//! integer matrices.
//!
//! Entry `a_ij` sends the j-th domain factor `Z(m_j)` to the i-th codomain
//! factor `Z(n_i)`; it is well defined iff `a_ij ≡ 0 (mod n_i / gcd(n_i, m_j))`.

use std::collections::HashSet;
use std::fmt;

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::{gcd, prime_power, reduce};
use crate::error::{Error, Result};
use crate::group::{FiniteAbelianGroup, GroupElement, Quotient, Subgroup};

/// Default cap on the group order for full automorphism enumeration.
pub const AUTOMORPHISM_CAP: u64 = 256;
/// Refuse full enumeration when |Aut(G)| exceeds this.
pub const AUT_ORDER_CAP: u64 = 200_000;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Homomorphism {
    domain: FiniteAbelianGroup,
    codomain: FiniteAbelianGroup,
    matrix: Vec<Vec<u64>>,
}

impl Homomorphism {
    /// Validates and reduces an integer matrix (rows index codomain factors).
    pub fn new(matrix: &[Vec<i64>], domain: &FiniteAbelianGroup, codomain: &FiniteAbelianGroup) -> Result<Self> {
        let rows = codomain.rank();
        let cols = domain.rank();
        if matrix.len() != rows || matrix.iter().any(|r| r.len() != cols) {
            return Err(Error::ShapeMismatch {
                rows: matrix.len(),
                cols: matrix.first().map_or(0, |r| r.len()),
                expected_rows: rows,
                expected_cols: cols,
            });
        }
        let mut out = vec![vec![0u64; cols]; rows];
        for (i, &n) in codomain.orders().iter().enumerate() {
            for (j, &m) in domain.orders().iter().enumerate() {
                let a = reduce(matrix[i][j], n);
                if !a.is_multiple_of(n / gcd(n, m)) {
                    return Err(Error::IllDefinedHomomorphism { row: i, col: j, value: matrix[i][j], from: m, to: n });
                }
                out[i][j] = a;
            }
        }
        Ok(Self { domain: domain.clone(), codomain: codomain.clone(), matrix: out })
    }

    /// The homomorphism sending the j-th standard generator to `columns[j]`.
    pub fn from_columns(
        domain: &FiniteAbelianGroup,
        codomain: &FiniteAbelianGroup,
        columns: &[GroupElement],
    ) -> Result<Self> {
        for c in columns {
            codomain.check(c)?;
        }
        let matrix: Vec<Vec<i64>> =
            (0..codomain.rank()).map(|i| columns.iter().map(|c| c.coords()[i] as i64).collect()).collect();
        if columns.len() != domain.rank() {
            return Err(Error::ShapeMismatch {
                rows: codomain.rank(),
                cols: columns.len(),
                expected_rows: codomain.rank(),
                expected_cols: domain.rank(),
            });
        }
        Self::new(&matrix, domain, codomain)
    }

    pub fn identity(g: &FiniteAbelianGroup) -> Self {
        Self::scalar(g, 1)
    }

    pub fn zero(domain: &FiniteAbelianGroup, codomain: &FiniteAbelianGroup) -> Self {
        Self {
            domain: domain.clone(),
            codomain: codomain.clone(),
            matrix: vec![vec![0; domain.rank()]; codomain.rank()],
        }
    }

    /// Multiplication by k.
    pub fn scalar(g: &FiniteAbelianGroup, k: i64) -> Self {
        let r = g.rank();
        let matrix =
            (0..r).map(|i| (0..r).map(|j| if i == j { reduce(k, g.orders()[i]) } else { 0 }).collect()).collect();
        Self { domain: g.clone(), codomain: g.clone(), matrix }
    }

    pub fn domain(&self) -> &FiniteAbelianGroup {
        &self.domain
    }

    pub fn codomain(&self) -> &FiniteAbelianGroup {
        &self.codomain
    }

    pub fn matrix(&self) -> &[Vec<u64>] {
        &self.matrix
    }

    pub fn is_endomorphism(&self) -> bool {
        self.domain == self.codomain
    }

    pub fn apply(&self, x: &GroupElement) -> Result<GroupElement> {
        self.domain.check(x)?;
        Ok(self.apply_unchecked(x))
    }

    pub(crate) fn apply_unchecked(&self, x: &GroupElement) -> GroupElement {
        let coords = self
            .matrix
            .iter()
            .zip(self.codomain.orders())
            .map(|(row, &n)| {
                let s: u128 = row.iter().zip(x.coords()).map(|(&a, &c)| a as u128 * c as u128).sum();
                (s % n as u128) as u64
            })
            .collect();
        GroupElement { coords }
    }

    pub(crate) fn apply_idx(&self, i: usize) -> usize {
        self.codomain.index_of(&self.apply_unchecked(&self.domain.element_at(i)))
    }

    /// Image index of every domain index.
    pub fn table(&self) -> Vec<usize> {
        (0..self.domain.size()).map(|i| self.apply_idx(i)).collect()
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Homomorphism) -> Result<Homomorphism> {
        other.codomain.same_as(&self.domain)?;
        let columns: Vec<GroupElement> = (0..other.domain.rank())
            .map(|j| self.apply_unchecked(&other.apply_unchecked(&other.domain.basis_element(j))))
            .collect();
        Self::from_columns(&other.domain, &self.codomain, &columns)
    }

    fn combine(&self, other: &Homomorphism, sign: i64) -> Result<Homomorphism> {
        self.domain.same_as(&other.domain)?;
        self.codomain.same_as(&other.codomain)?;
        let matrix = self
            .matrix
            .iter()
            .zip(&other.matrix)
            .map(|(r1, r2)| r1.iter().zip(r2).map(|(&a, &b)| a as i64 + sign * b as i64).collect())
            .collect::<Vec<Vec<i64>>>();
        Self::new(&matrix, &self.domain, &self.codomain)
    }

    pub fn add(&self, other: &Homomorphism) -> Result<Homomorphism> {
        self.combine(other, 1)
    }

    pub fn sub(&self, other: &Homomorphism) -> Result<Homomorphism> {
        self.combine(other, -1)
    }

    /// Elements mapped to zero.
    pub fn kernel(&self) -> Subgroup {
        let members: Vec<usize> = (0..self.domain.size()).filter(|&i| self.apply_idx(i) == 0).collect();
        let gens = members.iter().skip(1).map(|&i| self.domain.element_at(i)).collect();
        Subgroup::from_members(&self.domain, members, gens)
    }

    pub fn image(&self) -> Subgroup {
        let gens: Vec<usize> = (0..self.domain.rank())
            .map(|j| self.codomain.index_of(&self.apply_unchecked(&self.domain.basis_element(j))))
            .collect();
        self.codomain.closure(&gens)
    }

    /// α(K) for a subgroup K of the domain.
    pub fn image_of(&self, k: &Subgroup) -> Result<Subgroup> {
        self.domain.same_as(k.parent())?;
        let gens: Vec<usize> = k.member_indices().iter().map(|&i| self.apply_idx(i)).collect();
        Ok(self.codomain.closure(&gens))
    }

    /// α^{-1}(S) for a subgroup S of the codomain.
    pub fn preimage(&self, s: &Subgroup) -> Result<Subgroup> {
        self.codomain.same_as(s.parent())?;
        let members: Vec<usize> = (0..self.domain.size()).filter(|&i| s.contains_idx(self.apply_idx(i))).collect();
        let gens = members.iter().skip(1).map(|&i| self.domain.element_at(i)).collect();
        Ok(Subgroup::from_members(&self.domain, members, gens))
    }

    /// Kernel triviality on an endomorphism.
    pub fn is_automorphism(&self) -> bool {
        self.is_endomorphism() && (1..self.domain.size()).all(|i| self.apply_idx(i) != 0)
    }

    pub fn invert(&self) -> Result<Homomorphism> {
        if !self.is_automorphism() {
            return Err(Error::NotAutomorphism);
        }
        let g = &self.domain;
        let table = self.table();
        let mut inv = vec![0usize; g.size()];
        for (x, &y) in table.iter().enumerate() {
            inv[y] = x;
        }
        let columns: Vec<GroupElement> =
            (0..g.rank()).map(|j| g.element_at(inv[g.index_of(&g.basis_element(j))])).collect();
        Self::from_columns(g, g, &columns)
    }

    /// The dual map α̃ : Ĥ → Ĝ with (αx, y) = (x, α̃y).
    ///
    /// With self-dual coordinates the entry is `b_ji = a_ij · m_j / n_i mod m_j`,
    /// an integer by the congruence constraint.
    pub fn adjoint(&self) -> Homomorphism {
        let ms = self.domain.orders();
        let ns = self.codomain.orders();
        let matrix = (0..ms.len())
            .map(|j| {
                (0..ns.len())
                    .map(|i| {
                        let (m, n) = (ms[j], ns[i]);
                        let g = gcd(n, m);
                        let a = self.matrix[i][j] / (n / g);
                        ((a as u128 * (m / g) as u128) % m as u128) as u64
                    })
                    .collect()
            })
            .collect();
        Homomorphism { domain: self.codomain.clone(), codomain: self.domain.clone(), matrix }
    }

    /// Restriction to a subgroup K with α(K) ⊂ K, as an endomorphism of K in
    /// its own coordinates.
    pub fn restrict(&self, k: &Subgroup) -> Result<Restricted> {
        if !self.is_endomorphism() {
            return Err(Error::Precondition("restriction needs an endomorphism".into()));
        }
        self.domain.same_as(k.parent())?;
        if !k.member_indices().iter().all(|&i| k.contains_idx(self.apply_idx(i))) {
            return Err(Error::NotInvariant("α(K) ⊄ K"));
        }
        let sub = k.as_group()?;
        let columns: Vec<GroupElement> = (0..sub.group.rank())
            .map(|j| {
                let x = sub.embedding.apply_unchecked(&sub.group.basis_element(j));
                sub.local_coords(&self.apply_unchecked(&x)).expect("K is invariant")
            })
            .collect();
        let map = Homomorphism::from_columns(&sub.group, &sub.group, &columns)?;
        Ok(Restricted { map, embedding: sub.embedding })
    }

    /// The map x + K ↦ αx + K on G/K, defined when α(K) ⊂ K.
    pub fn induced_on_quotient(&self, k: &Subgroup) -> Result<Induced> {
        if !self.is_endomorphism() {
            return Err(Error::Precondition("induced map needs an endomorphism".into()));
        }
        self.domain.same_as(k.parent())?;
        if !k.member_indices().iter().all(|&i| k.contains_idx(self.apply_idx(i))) {
            return Err(Error::NotInvariant("α(K) ⊄ K"));
        }
        let quotient = self.domain.quotient(k)?;
        let q = &quotient.group;
        let proj = quotient.projection.table();
        let mut lift = vec![usize::MAX; q.size()];
        for (x, &c) in proj.iter().enumerate() {
            if lift[c] == usize::MAX {
                lift[c] = x;
            }
        }
        let columns: Vec<GroupElement> = (0..q.rank())
            .map(|j| {
                let x = lift[q.index_of(&q.basis_element(j))];
                q.element_at(proj[self.apply_idx(x)])
            })
            .collect();
        let map = Homomorphism::from_columns(q, q, &columns)?;
        Ok(Induced { map, quotient })
    }
}

/// A restricted endomorphism with the embedding of its domain.
#[derive(Clone, Debug)]
pub struct Restricted {
    pub map: Homomorphism,
    pub embedding: Homomorphism,
}

/// An induced map on a quotient together with the quotient data.
#[derive(Clone, Debug)]
pub struct Induced {
    pub map: Homomorphism,
    pub quotient: Quotient,
}

impl fmt::Debug for Homomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Hom[{} → {}]{:?}", self.domain, self.codomain, self.matrix)
    }
}

/// Checks (αx, y) = (x, α̃y) for all x, y, comparing exponents of ζ_N with N
/// the lcm of both exponents.
pub fn adjoint_law_holds(alpha: &Homomorphism, adj: &Homomorphism) -> bool {
    if alpha.domain != adj.codomain || alpha.codomain != adj.domain {
        return false;
    }
    let g = &alpha.domain;
    let h = &alpha.codomain;
    let n = crate::arith::lcm(g.exponent(), h.exponent());
    let exp = |grp: &FiniteAbelianGroup, x: &GroupElement, y: &GroupElement| -> u64 {
        let s: u128 = x
            .coords()
            .iter()
            .zip(y.coords())
            .zip(grp.orders())
            .map(|((&a, &b), &m)| a as u128 * b as u128 * (n / m) as u128)
            .sum();
        (s % n as u128) as u64
    };
    let ax: Vec<GroupElement> = g.elements().map(|x| alpha.apply_unchecked(&x)).collect();
    let ay: Vec<GroupElement> = h.elements().map(|y| adj.apply_unchecked(&y)).collect();
    g.elements().zip(&ax).all(|(x, axx)| h.elements().zip(&ay).all(|(y, ayy)| exp(h, axx, &y) == exp(g, &x, ayy)))
}

/// (I + α, I − α).
pub fn id_plus_minus(alpha: &Homomorphism) -> Result<(Homomorphism, Homomorphism)> {
    if !alpha.is_endomorphism() {
        return Err(Error::Precondition("I ± α needs an endomorphism".into()));
    }
    let id = Homomorphism::identity(alpha.domain());
    Ok((id.add(alpha)?, id.sub(alpha)?))
}

/// α, I + α and I − α are all automorphisms.
pub fn check_heyde_admissible(alpha: &Homomorphism) -> bool {
    match id_plus_minus(alpha) {
        Ok((p, m)) => alpha.is_automorphism() && p.is_automorphism() && m.is_automorphism(),
        Err(_) => false,
    }
}

/// |Aut(G)| from the classical formula for abelian p-groups, multiplied over
/// the primary components.
pub fn aut_order(g: &FiniteAbelianGroup) -> BigUint {
    let mut total = BigUint::from(1u32);
    for p in g.primes() {
        let es: Vec<u32> =
            g.orders().iter().filter_map(|&n| prime_power(n).filter(|&(q, _)| q == p).map(|(_, e)| e)).collect();
        let n = es.len();
        let pb = BigUint::from(p);
        for k in 0..n {
            let d = (0..n).filter(|&l| es[l] == es[k]).max().unwrap() + 1;
            let c = (0..n).filter(|&l| es[l] == es[k]).min().unwrap() + 1;
            total *= pb.pow(d as u32) - pb.pow(k as u32);
            total *= pb.pow(es[k] * (n - d) as u32);
            total *= pb.pow((es[k] - 1) * (n - c + 1) as u32);
        }
    }
    total
}

/// All automorphisms, sorted by matrix.
///
/// Backtracks over images of the standard generators. A partial assignment
/// survives only if the images span a subgroup of the same order as the
/// generators assigned so far, i.e. the partial map is injective.
pub fn enumerate_automorphisms(g: &FiniteAbelianGroup, cap: u64) -> Result<Vec<Homomorphism>> {
    if g.order() > cap {
        return Err(Error::CapExceeded { what: "automorphism enumeration", size: g.order(), cap });
    }
    let expected = aut_order(g);
    if expected > BigUint::from(AUT_ORDER_CAP) {
        let size = u64::try_from(&expected).unwrap_or(u64::MAX);
        return Err(Error::CapExceeded { what: "automorphism count", size, cap: AUT_ORDER_CAP });
    }
    let candidates: Vec<Vec<usize>> = g
        .orders()
        .iter()
        .map(|&m| (0..g.size()).filter(|&i| g.element_order(&g.element_at(i)) == m).collect())
        .collect();
    let mut out = Vec::new();
    let mut chosen = Vec::with_capacity(g.rank());
    let mut mask = vec![false; g.size()];
    mask[0] = true;
    backtrack(g, &candidates, &mut chosen, &mask, vec![0], 1, &mut out)?;
    out.sort_by(|a, b| a.matrix.cmp(&b.matrix));
    Ok(out)
}

fn backtrack(
    g: &FiniteAbelianGroup,
    candidates: &[Vec<usize>],
    chosen: &mut Vec<GroupElement>,
    mask: &[bool],
    members: Vec<usize>,
    span_order: u64,
    out: &mut Vec<Homomorphism>,
) -> Result<()> {
    let j = chosen.len();
    if j == g.rank() {
        out.push(Homomorphism::from_columns(g, g, chosen)?);
        return Ok(());
    }
    let target = span_order * g.orders()[j];
    for &c in &candidates[j] {
        if mask[c] {
            continue;
        }
        let mut m2 = mask.to_vec();
        let mut mem2 = members.clone();
        g.extend_members(&mut m2, &mut mem2, c);
        if mem2.len() as u64 != target {
            continue;
        }
        chosen.push(g.element_at(c));
        backtrack(g, candidates, chosen, &m2, mem2, target, out)?;
        chosen.pop();
    }
    Ok(())
}

/// Up to `count` distinct automorphisms drawn with a seeded generator by
/// rejection sampling of generator images.
pub fn sample_automorphisms(g: &FiniteAbelianGroup, count: usize, seed: u64) -> Vec<Homomorphism> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    let available = aut_order(g);
    let target = if available < BigUint::from(count) { u64::try_from(&available).unwrap() as usize } else { count };
    while out.len() < target {
        let columns: Vec<GroupElement> = g
            .orders()
            .iter()
            .map(|&m| {
                // Uniform over elements killed by m.
                let coords = g
                    .orders()
                    .iter()
                    .map(|&n| {
                        let step = n / gcd(n, m);
                        step * rng.gen_range(0..n / step)
                    })
                    .collect();
                GroupElement { coords }
            })
            .collect();
        let h = Homomorphism::from_columns(g, g, &columns).expect("columns are killed by the source orders");
        if h.is_automorphism() && seen.insert(h.matrix.clone()) {
            out.push(h);
        }
    }
    out
}

/// Full enumeration when feasible, otherwise a seeded sample.
pub fn automorphisms_or_sample(
    g: &FiniteAbelianGroup,
    full_limit: u64,
    samples: usize,
    seed: u64,
) -> Vec<Homomorphism> {
    if g.order() <= AUTOMORPHISM_CAP && aut_order(g) <= BigUint::from(full_limit) {
        enumerate_automorphisms(g, AUTOMORPHISM_CAP).expect("within caps")
    } else {
        sample_automorphisms(g, samples, seed)
    }
}
