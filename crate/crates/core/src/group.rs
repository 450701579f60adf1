//! Finite abelian groups in primary decomposition.
//!
//! A group is `Z(n_1) × … × Z(n_r)` with every `n_i` a prime power, sorted by
//! prime and then exponent. Elements are coordinate vectors; internally they
//! are also addressed by a mixed-radix index whose order agrees with the
//! lexicographic order on coordinates.

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use crate::arith::{factorize, lcm, prime_power};
use crate::cyclotomic::CyclotomicField;
use crate::error::{Error, Result};
use crate::morphism::Homomorphism;

/// Default cap on the group order for subgroup enumeration.
pub const SUBGROUP_CAP: u64 = 4096;

#[derive(Debug)]
struct GroupData {
    orders: Vec<u64>,
    strides: Vec<u64>,
    order: u64,
    exponent: u64,
    field: Arc<CyclotomicField>,
}

/// A finite abelian group `⊕ Z(n_i)` with prime-power `n_i`.
#[derive(Clone)]
pub struct FiniteAbelianGroup {
    data: Arc<GroupData>,
}

/// Coordinates of an element; `coords[i] ∈ [0, n_i)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    pub(crate) coords: Vec<u64>,
}

impl GroupElement {
    pub fn coords(&self) -> &[u64] {
        &self.coords
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", c)?;
        }
        write!(f, ")")
    }
}

/// Sort key putting prime-power orders in canonical position.
fn canonical_key(n: u64) -> (u64, u64) {
    let (p, _) = prime_power(n).expect("canonical orders are prime powers");
    (p, n)
}

impl FiniteAbelianGroup {
    /// Builds a group from arbitrary positive cyclic orders, splitting
    /// composite orders into prime powers and dropping trivial factors.
    pub fn new(orders: &[i64]) -> Result<Self> {
        let mut out = Vec::new();
        for &n in orders {
            if n <= 0 {
                return Err(Error::InvalidOrder(n));
            }
            for (p, e) in factorize(n as u64) {
                out.push(p.pow(e));
            }
        }
        out.sort_by_key(|&n| canonical_key(n));
        Self::from_canonical(out)
    }

    pub fn cyclic(n: u64) -> Result<Self> {
        Self::new(&[n as i64])
    }

    fn from_canonical(orders: Vec<u64>) -> Result<Self> {
        let order = orders.iter().try_fold(1u64, |acc, &n| acc.checked_mul(n)).ok_or(Error::CapExceeded {
            what: "group order",
            size: u64::MAX,
            cap: u64::MAX,
        })?;
        let exponent = orders.iter().fold(1, |acc, &n| lcm(acc, n));
        let mut strides = vec![1u64; orders.len()];
        for i in (0..orders.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * orders[i + 1];
        }
        let field = CyclotomicField::new(exponent)?;
        Ok(Self { data: Arc::new(GroupData { orders, strides, order, exponent, field }) })
    }

    pub fn orders(&self) -> &[u64] {
        &self.data.orders
    }

    pub fn rank(&self) -> usize {
        self.data.orders.len()
    }

    pub fn order(&self) -> u64 {
        self.data.order
    }

    pub fn exponent(&self) -> u64 {
        self.data.exponent
    }

    /// The field Q(ζ_N), N the exponent, in which character values live.
    pub fn field(&self) -> &Arc<CyclotomicField> {
        &self.data.field
    }

    pub fn is_trivial(&self) -> bool {
        self.data.order == 1
    }

    /// True iff the group has no element of order 2.
    pub fn has_odd_order(&self) -> bool {
        self.data.order % 2 == 1
    }

    /// Distinct primes dividing the order, increasing.
    pub fn primes(&self) -> Vec<u64> {
        let mut ps: Vec<u64> = self.data.orders.iter().map(|&n| canonical_key(n).0).collect();
        ps.dedup();
        ps
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement { coords: vec![0; self.rank()] }
    }

    /// Element with the given coordinates, reduced modulo the cyclic orders.
    pub fn element(&self, coords: &[i64]) -> Result<GroupElement> {
        if coords.len() != self.rank() {
            return Err(Error::ElementMismatch {
                coords: coords.iter().map(|&c| c as u64).collect(),
                orders: self.orders().to_vec(),
            });
        }
        Ok(GroupElement {
            coords: coords.iter().zip(self.orders()).map(|(&c, &n)| crate::arith::reduce(c, n)).collect(),
        })
    }

    /// The i-th standard generator.
    pub fn basis_element(&self, i: usize) -> GroupElement {
        let mut coords = vec![0; self.rank()];
        coords[i] = 1 % self.data.orders[i];
        GroupElement { coords }
    }

    pub fn contains(&self, x: &GroupElement) -> bool {
        x.coords.len() == self.rank() && x.coords.iter().zip(self.orders()).all(|(&c, &n)| c < n)
    }

    pub fn check(&self, x: &GroupElement) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(Error::ElementMismatch { coords: x.coords.clone(), orders: self.orders().to_vec() })
        }
    }

    pub fn add(&self, x: &GroupElement, y: &GroupElement) -> Result<GroupElement> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.add_unchecked(x, y))
    }

    pub fn neg(&self, x: &GroupElement) -> Result<GroupElement> {
        self.check(x)?;
        Ok(GroupElement { coords: x.coords.iter().zip(self.orders()).map(|(&c, &n)| (n - c) % n).collect() })
    }

    pub fn sub(&self, x: &GroupElement, y: &GroupElement) -> Result<GroupElement> {
        let ny = self.neg(y)?;
        self.add(x, &ny)
    }

    /// k·x for an integer k.
    pub fn scale(&self, k: i64, x: &GroupElement) -> Result<GroupElement> {
        self.check(x)?;
        Ok(GroupElement {
            coords: x
                .coords
                .iter()
                .zip(self.orders())
                .map(|(&c, &n)| ((crate::arith::reduce(k, n) as u128 * c as u128) % n as u128) as u64)
                .collect(),
        })
    }

    pub(crate) fn add_unchecked(&self, x: &GroupElement, y: &GroupElement) -> GroupElement {
        GroupElement {
            coords: x.coords.iter().zip(&y.coords).zip(self.orders()).map(|((&a, &b), &n)| (a + b) % n).collect(),
        }
    }

    /// Order of an element.
    pub fn element_order(&self, x: &GroupElement) -> u64 {
        x.coords.iter().zip(self.orders()).fold(1, |acc, (&c, &n)| lcm(acc, n / crate::arith::gcd(c, n)))
    }

    // ---- index arithmetic -------------------------------------------------

    pub(crate) fn size(&self) -> usize {
        usize::try_from(self.data.order).expect("group order fits in usize")
    }

    pub fn index_of(&self, x: &GroupElement) -> usize {
        x.coords.iter().zip(&self.data.strides).map(|(&c, &s)| (c * s) as usize).sum()
    }

    pub fn element_at(&self, idx: usize) -> GroupElement {
        let mut idx = idx as u64;
        let coords = self
            .data
            .strides
            .iter()
            .zip(self.orders())
            .map(|(&s, &n)| {
                let c = (idx / s) % n;
                idx %= s;
                c
            })
            .collect();
        GroupElement { coords }
    }

    /// All elements in canonical (lexicographic) order.
    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        (0..self.size()).map(move |i| self.element_at(i))
    }

    pub(crate) fn add_idx(&self, a: usize, b: usize) -> usize {
        let (mut a, mut b) = (a as u64, b as u64);
        let mut out = 0u64;
        for (&s, &n) in self.data.strides.iter().zip(self.orders()) {
            let (ca, cb) = (a / s, b / s);
            a %= s;
            b %= s;
            out += ((ca + cb) % n) * s;
        }
        out as usize
    }

    pub(crate) fn neg_idx(&self, a: usize) -> usize {
        let mut a = a as u64;
        let mut out = 0u64;
        for (&s, &n) in self.data.strides.iter().zip(self.orders()) {
            let c = a / s;
            a %= s;
            out += ((n - c) % n) * s;
        }
        out as usize
    }

    pub(crate) fn sub_idx(&self, a: usize, b: usize) -> usize {
        self.add_idx(a, self.neg_idx(b))
    }

    pub(crate) fn scale_idx(&self, k: u64, a: usize) -> usize {
        let mut a = a as u64;
        let mut out = 0u64;
        for (&s, &n) in self.data.strides.iter().zip(self.orders()) {
            let c = a / s;
            a %= s;
            out += (((k % n) as u128 * c as u128 % n as u128) as u64) * s;
        }
        out as usize
    }

    pub(crate) fn same_as(&self, other: &Self) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::GroupMismatch { left: self.orders().to_vec(), right: other.orders().to_vec() })
        }
    }

    // ---- structural subgroups ---------------------------------------------

    pub fn trivial_subgroup(&self) -> Subgroup {
        Subgroup::from_members(self, vec![0], vec![])
    }

    pub fn full_subgroup(&self) -> Subgroup {
        let gens = (0..self.rank()).map(|i| self.basis_element(i)).collect();
        Subgroup::from_members(self, (0..self.size()).collect(), gens)
    }

    /// X^(2) = {2x : x ∈ X}.
    pub fn doubling_image(&self) -> Subgroup {
        let mut members: Vec<usize> = (0..self.size()).map(|i| self.scale_idx(2, i)).collect();
        members.sort_unstable();
        members.dedup();
        let gens = (0..self.rank())
            .map(|i| self.element_at(self.scale_idx(2, self.index_of(&self.basis_element(i)))))
            .collect();
        Subgroup::from_members(self, members, gens)
    }

    /// Y_(2) = {y : 2y = 0}.
    pub fn two_torsion(&self) -> Subgroup {
        let members: Vec<usize> = (0..self.size()).filter(|&i| self.scale_idx(2, i) == 0).collect();
        let gens = members.iter().skip(1).map(|&i| self.element_at(i)).collect();
        Subgroup::from_members(self, members, gens)
    }

    /// Smallest subgroup containing `gens`.
    pub fn subgroup_generated(&self, gens: &[GroupElement]) -> Result<Subgroup> {
        for g in gens {
            self.check(g)?;
        }
        let idx: Vec<usize> = gens.iter().map(|g| self.index_of(g)).collect();
        Ok(self.closure(&idx))
    }

    pub(crate) fn closure(&self, gens: &[usize]) -> Subgroup {
        let mut mask = vec![false; self.size()];
        mask[0] = true;
        let mut members = vec![0usize];
        let mut used = Vec::new();
        for &g in gens {
            if mask[g] {
                continue;
            }
            self.extend_members(&mut mask, &mut members, g);
            used.push(self.element_at(g));
        }
        members.sort_unstable();
        Subgroup { parent: self.clone(), members, mask, generators: used }
    }

    /// Replaces S by S + ⟨g⟩ in place.
    pub(crate) fn extend_members(&self, mask: &mut [bool], members: &mut Vec<usize>, g: usize) {
        let base = members.clone();
        let mut multiple = g;
        while !mask[multiple] {
            for &h in &base {
                let s = self.add_idx(h, multiple);
                mask[s] = true;
                members.push(s);
            }
            multiple = self.add_idx(multiple, g);
        }
    }

    /// Every subgroup, sorted by order and then by element set.
    ///
    /// Breadth-first closure from the trivial subgroup, adjoining one coset
    /// representative at a time and deduplicating by element set.
    pub fn enumerate_subgroups(&self, cap: u64) -> Result<Vec<Subgroup>> {
        if self.order() > cap {
            return Err(Error::CapExceeded { what: "subgroup enumeration", size: self.order(), cap });
        }
        let start = self.trivial_subgroup();
        let mut seen: HashSet<Vec<usize>> = HashSet::new();
        seen.insert(start.members.clone());
        let mut queue = vec![start];
        let mut head = 0;
        while head < queue.len() {
            let h = queue[head].clone();
            head += 1;
            let mut covered = h.mask.clone();
            for g in 0..self.size() {
                if covered[g] {
                    continue;
                }
                for &m in &h.members {
                    covered[self.add_idx(g, m)] = true;
                }
                let mut mask = h.mask.clone();
                let mut members = h.members.clone();
                self.extend_members(&mut mask, &mut members, g);
                members.sort_unstable();
                if seen.insert(members.clone()) {
                    let mut generators = h.generators.clone();
                    generators.push(self.element_at(g));
                    queue.push(Subgroup { parent: self.clone(), members, mask, generators });
                }
            }
        }
        queue.sort_by(|a, b| (a.order(), &a.members).cmp(&(b.order(), &b.members)));
        Ok(queue)
    }

    /// The coset group G/K with its projection G → G/K.
    pub fn quotient(&self, k: &Subgroup) -> Result<Quotient> {
        self.same_as(&k.parent)?;
        let n = self.size();
        let mut rep = vec![usize::MAX; n];
        let mut reps = Vec::new();
        for x in 0..n {
            if rep[x] != usize::MAX {
                continue;
            }
            reps.push(x);
            for &m in &k.members {
                rep[self.add_idx(x, m)] = x;
            }
        }
        let add = |a: usize, b: usize| rep[self.add_idx(a, b)];
        let basis = cyclic_basis(&reps, 0, &add);
        let (group, coords_of) = coordinatize(&basis, &add)?;
        let mut q_index = vec![usize::MAX; n];
        for (qi, &r) in coords_of.iter().enumerate() {
            q_index[r] = qi;
        }
        let columns: Vec<GroupElement> =
            (0..self.rank()).map(|j| group.element_at(q_index[rep[self.index_of(&self.basis_element(j))]])).collect();
        let projection = Homomorphism::from_columns(self, &group, &columns)?;
        Ok(Quotient { group, projection })
    }
}

impl PartialEq for FiniteAbelianGroup {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.data, &other.data) || self.data.orders == other.data.orders
    }
}

impl Eq for FiniteAbelianGroup {}

impl std::hash::Hash for FiniteAbelianGroup {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.orders().hash(state);
    }
}

impl fmt::Debug for FiniteAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for FiniteAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.rank() == 0 {
            return write!(f, "Z(1)");
        }
        let parts: Vec<String> = self.orders().iter().map(|n| format!("Z({})", n)).collect();
        write!(f, "{}", parts.join("×"))
    }
}

/// The quotient group together with the coset projection.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub group: FiniteAbelianGroup,
    pub projection: Homomorphism,
}

/// A subgroup stored as its full, sorted element set.
#[derive(Clone)]
pub struct Subgroup {
    parent: FiniteAbelianGroup,
    members: Vec<usize>,
    mask: Vec<bool>,
    generators: Vec<GroupElement>,
}

impl Subgroup {
    pub(crate) fn from_members(
        parent: &FiniteAbelianGroup,
        mut members: Vec<usize>,
        generators: Vec<GroupElement>,
    ) -> Self {
        members.sort_unstable();
        members.dedup();
        let mut mask = vec![false; parent.size()];
        for &m in &members {
            mask[m] = true;
        }
        Self { parent: parent.clone(), members, mask, generators }
    }

    /// Builds a subgroup from an explicit element set, verifying closure.
    pub fn from_elements(parent: &FiniteAbelianGroup, elements: &[GroupElement]) -> Result<Self> {
        for e in elements {
            parent.check(e)?;
        }
        let idx: Vec<usize> = elements.iter().map(|e| parent.index_of(e)).collect();
        let candidate = Self::from_members(parent, idx.clone(), elements.to_vec());
        let closed = parent.closure(&idx);
        if closed.members != candidate.members {
            return Err(Error::Precondition("element set is not a subgroup".into()));
        }
        Ok(closed)
    }

    pub fn parent(&self) -> &FiniteAbelianGroup {
        &self.parent
    }

    pub fn order(&self) -> u64 {
        self.members.len() as u64
    }

    pub fn contains(&self, x: &GroupElement) -> bool {
        self.parent.contains(x) && self.mask[self.parent.index_of(x)]
    }

    pub(crate) fn contains_idx(&self, i: usize) -> bool {
        self.mask[i]
    }

    pub(crate) fn member_indices(&self) -> &[usize] {
        &self.members
    }

    pub(crate) fn mask(&self) -> &[bool] {
        &self.mask
    }

    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        self.members.iter().map(move |&i| self.parent.element_at(i))
    }

    /// Generators recorded while the subgroup was built (informational).
    pub fn generators(&self) -> &[GroupElement] {
        &self.generators
    }

    /// A direct-sum basis: elements of prime-power order whose cyclic
    /// subgroups form an internal direct sum equal to the subgroup.
    pub fn basis(&self) -> Vec<(GroupElement, u64)> {
        let g = &self.parent;
        let add = |a: usize, b: usize| g.add_idx(a, b);
        cyclic_basis(&self.members, 0, &add).into_iter().map(|(e, o)| (g.element_at(e), o)).collect()
    }

    pub fn is_trivial(&self) -> bool {
        self.members.len() == 1
    }

    pub fn is_full(&self) -> bool {
        self.members.len() == self.parent.size()
    }

    pub fn is_subset_of(&self, other: &Subgroup) -> bool {
        self.parent == other.parent && self.members.iter().all(|&m| other.mask[m])
    }

    /// Verifies the subgroup axioms on the stored element set.
    pub fn is_closed(&self) -> bool {
        let g = &self.parent;
        self.mask[0]
            && self.members.iter().all(|&a| self.mask[g.neg_idx(a)])
            && self.members.iter().all(|&a| self.members.iter().all(|&b| self.mask[g.add_idx(a, b)]))
    }

    /// The subgroup as an abstract group with coordinates, plus the
    /// embedding into the parent.
    pub fn as_group(&self) -> Result<Embedded> {
        let g = &self.parent;
        let add = |a: usize, b: usize| g.add_idx(a, b);
        let basis = cyclic_basis(&self.members, 0, &add);
        let (group, coords_of) = coordinatize(&basis, &add)?;
        let columns: Vec<GroupElement> = (0..group.rank()).map(|j| g.element_at(basis_sorted(&basis)[j].0)).collect();
        let embedding = Homomorphism::from_columns(&group, g, &columns)?;
        let mut local = vec![usize::MAX; g.size()];
        for (li, &pi) in coords_of.iter().enumerate() {
            local[pi] = li;
        }
        Ok(Embedded { group, embedding, local })
    }
}

/// A subgroup realised as a group in its own coordinates.
#[derive(Clone, Debug)]
pub struct Embedded {
    pub group: FiniteAbelianGroup,
    pub embedding: Homomorphism,
    local: Vec<usize>,
}

impl Embedded {
    /// Coordinates in the subgroup of an element of the parent, if it lies in
    /// the subgroup.
    pub fn local_coords(&self, x: &GroupElement) -> Option<GroupElement> {
        let parent = self.embedding.codomain();
        if !parent.contains(x) {
            return None;
        }
        match self.local[parent.index_of(x)] {
            usize::MAX => None,
            i => Some(self.group.element_at(i)),
        }
    }
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.parent == other.parent && self.members == other.members
    }
}

impl Eq for Subgroup {}

impl std::hash::Hash for Subgroup {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.parent.orders().hash(state);
        self.members.hash(state);
    }
}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let els: Vec<String> = self.elements().map(|e| e.to_string()).collect();
        write!(f, "Subgroup[{}]{{{}}}", self.parent, els.join(", "))
    }
}

/// Orders a cyclic basis canonically (by prime, then order).
fn basis_sorted(basis: &[(usize, u64)]) -> Vec<(usize, u64)> {
    let mut b = basis.to_vec();
    b.sort_by_key(|&(_, o)| canonical_key(o));
    b
}

/// Builds the coordinate group for a cyclic basis and lists, for every
/// coordinate index of that group, the corresponding original element.
fn coordinatize(
    basis: &[(usize, u64)],
    add: &dyn Fn(usize, usize) -> usize,
) -> Result<(FiniteAbelianGroup, Vec<usize>)> {
    let sorted = basis_sorted(basis);
    let group = FiniteAbelianGroup::from_canonical(sorted.iter().map(|&(_, o)| o).collect())?;
    let mut coords_of = Vec::with_capacity(group.size());
    for qi in 0..group.size() {
        let c = group.element_at(qi);
        let mut acc = 0usize;
        for (&k, &(b, _)) in c.coords.iter().zip(&sorted) {
            for _ in 0..k {
                acc = add(acc, b);
            }
        }
        coords_of.push(acc);
    }
    Ok((group, coords_of))
}

/// Decomposes a finite abelian group, given as a set of element ids closed
/// under `add` with identity `zero`, into a direct sum of cyclic groups of
/// prime-power order. Returns `(generator, order)` pairs.
///
/// Per prime p, the p-primary part is split greedily: pick an element whose
/// image modulo the span S of the basis so far has the largest order p^e,
/// choosing one whose own order is also p^e; such a lift always exists, so
/// S + ⟨b⟩ is direct.
pub(crate) fn cyclic_basis(elements: &[usize], zero: usize, add: &dyn Fn(usize, usize) -> usize) -> Vec<(usize, u64)> {
    let mul = |k: u64, x: usize| {
        let mut acc = zero;
        for _ in 0..k {
            acc = add(acc, x);
        }
        acc
    };
    let order_of = |x: usize| {
        let mut k = 1u64;
        let mut acc = x;
        while acc != zero {
            acc = add(acc, x);
            k += 1;
        }
        k
    };
    let orders: Vec<(usize, u64)> = elements.iter().map(|&x| (x, order_of(x))).collect();
    let total = elements.len() as u64;
    let mut basis = Vec::new();
    for (p, _) in factorize(total) {
        let part: Vec<(usize, u64)> =
            orders.iter().copied().filter(|&(_, o)| prime_power(o).map_or(o == 1, |(q, _)| q == p)).collect();
        let mut span: HashSet<usize> = HashSet::from([zero]);
        while span.len() < part.len() {
            let quotient_order = |x: usize| {
                let mut e = 1u64;
                let mut acc = x;
                while !span.contains(&acc) {
                    acc = mul(p, acc);
                    e *= p;
                }
                e
            };
            let qos: Vec<u64> = part.iter().map(|&(x, _)| quotient_order(x)).collect();
            let best = *qos.iter().max().expect("nonempty primary part");
            let (b, ob) = part
                .iter()
                .zip(&qos)
                .find(|(&(_, o), &q)| q == best && o == best)
                .map(|(&(x, o), _)| (x, o))
                .expect("a lift of maximal quotient order exists");
            let base: Vec<usize> = span.iter().copied().collect();
            let mut m = b;
            for _ in 1..ob {
                for &s in &base {
                    span.insert(add(s, m));
                }
                m = add(m, b);
            }
            basis.push((b, ob));
        }
    }
    basis
}
