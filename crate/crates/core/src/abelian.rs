//! Finitely generated abelian groups in canonical coordinates, together with
//! homomorphisms, kernels, images, n-torsion and mod-n quotients.
//!
//! A group is a list of generator orders (`0` marks a free generator, every
//! other entry is at least 2). Elements are integer coordinate vectors with
//! torsion coordinates reduced to `[0, d)`; equality of elements is equality
//! of canonical coordinates. Subgroups are generator lists inside an ambient
//! group, never standalone quotients, so inclusion maps stay canonical.

use crate::matrix::{self, IntMat};
use crate::Int;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AbelianError {
    #[error("coordinate vector has length {got}, group has {expected} generators")]
    LengthMismatch { expected: usize, got: usize },
    #[error("matrix shape {rows}x{cols} does not match target {target_dim} x source {source_dim}")]
    ShapeMismatch { rows: usize, cols: usize, target_dim: usize, source_dim: usize },
}

/// A finitely generated abelian group in a fixed generator basis.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FgGroup {
    /// Order of each generator; 0 means infinite order, other entries are >= 2.
    orders: Vec<Int>,
    /// Relation matrix (rows are relations over the generators), retained for
    /// provenance. For canonically built groups this is the diagonal of the
    /// finite orders.
    presentation: IntMat,
}

impl fmt::Debug for FgGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for FgGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.orders.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .orders
            .iter()
            .map(|d| if d.is_zero() { "Z".to_string() } else { format!("Z/{d}") })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// An element of an [`FgGroup`] in canonical coordinates.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GroupElement {
    pub coords: Vec<Int>,
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl FgGroup {
    /// Free abelian group of the given rank.
    pub fn free(rank: usize) -> Self {
        FgGroup::from_orders(vec![Int::zero(); rank])
    }

    /// Cyclic group `Z/d`; `d = 0` gives `Z` and `d = 1` the trivial group.
    pub fn cyclic(d: impl Into<Int>) -> Self {
        FgGroup::from_orders(vec![d.into()])
    }

    pub fn trivial() -> Self {
        FgGroup::from_orders(Vec::new())
    }

    /// Group with the given generator orders; order-1 generators are dropped.
    pub fn from_orders(orders: Vec<Int>) -> Self {
        assert!(orders.iter().all(|d| !d.is_negative()), "orders must be nonnegative");
        let orders: Vec<Int> = orders.into_iter().filter(|d| !d.is_one()).collect();
        let finite: Vec<Int> = orders.iter().filter(|d| !d.is_zero()).cloned().collect();
        let mut presentation = IntMat::zeros(finite.len(), orders.len());
        let mut r = 0;
        for (j, d) in orders.iter().enumerate() {
            if !d.is_zero() {
                presentation[(r, j)] = d.clone();
                r += 1;
            }
        }
        FgGroup { orders, presentation }
    }

    /// Normalizes a presentation (rows = relations, columns = generators)
    /// via Smith normal form. Returns the group together with the projection
    /// from the free cover `Z^cols` onto it, so elements written over the
    /// original generators can be carried into the normalized basis.
    pub fn from_presentation(relations: IntMat) -> (FgGroup, GroupHom) {
        let g = relations.cols();
        let snf = matrix::smith_normal_form(&relations.transpose());
        // New coordinates are w = U v; relation subgroup becomes the span of
        // the s_j e_j, so generator j has order s_j (0 past the diagonal).
        let diag = snf.diag();
        let mut orders = Vec::new();
        let mut kept_rows = Vec::new();
        for j in 0..g {
            let d = diag.get(j).cloned().unwrap_or_else(Int::zero);
            if !d.is_one() {
                orders.push(d);
                kept_rows.push(j);
            }
        }
        let group = FgGroup { orders, presentation: relations };
        let mut map = IntMat::zeros(group.dim(), g);
        for (new_i, &old_i) in kept_rows.iter().enumerate() {
            for j in 0..g {
                map[(new_i, j)] = snf.u[(old_i, j)].clone();
            }
        }
        let cover = FgGroup::free(g);
        let proj = GroupHom::new(cover, group.clone(), map).expect("projection shape");
        (group, proj)
    }

    pub fn direct_sum(parts: &[FgGroup]) -> FgGroup {
        let orders = parts.iter().flat_map(|p| p.orders.iter().cloned()).collect();
        FgGroup::from_orders(orders)
    }

    /// Number of generators in the canonical basis.
    pub fn dim(&self) -> usize {
        self.orders.len()
    }

    pub fn orders(&self) -> &[Int] {
        &self.orders
    }

    pub fn presentation(&self) -> &IntMat {
        &self.presentation
    }

    /// Rank of the free part.
    pub fn rank(&self) -> usize {
        self.orders.iter().filter(|d| d.is_zero()).count()
    }

    pub fn is_trivial(&self) -> bool {
        self.orders.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.rank() == 0
    }

    /// Invariant factors d_1 | d_2 | ... | d_k of the torsion part.
    pub fn invariant_factors(&self) -> Vec<Int> {
        let finite: Vec<Int> = self.orders.iter().filter(|d| !d.is_zero()).cloned().collect();
        if finite.is_empty() {
            return Vec::new();
        }
        let diag = IntMat::diagonal(&finite, finite.len(), finite.len());
        matrix::smith_normal_form(&diag)
            .diag()
            .into_iter()
            .filter(|d| !d.is_one())
            .collect()
    }

    /// Canonical representative of a coordinate vector.
    pub fn element(&self, coords: &[Int]) -> Result<GroupElement, AbelianError> {
        if coords.len() != self.dim() {
            return Err(AbelianError::LengthMismatch { expected: self.dim(), got: coords.len() });
        }
        let coords = coords
            .iter()
            .zip(&self.orders)
            .map(|(c, d)| if d.is_zero() { c.clone() } else { c.mod_floor(d) })
            .collect();
        Ok(GroupElement { coords })
    }

    pub fn element_i64(&self, coords: &[i64]) -> GroupElement {
        self.element(&coords.iter().map(|&c| Int::from(c)).collect::<Vec<_>>()).expect("length")
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement { coords: vec![Int::zero(); self.dim()] }
    }

    pub fn basis_element(&self, j: usize) -> GroupElement {
        let mut coords = vec![Int::zero(); self.dim()];
        coords[j] = Int::one();
        self.element(&coords).expect("length")
    }

    pub fn generators(&self) -> Vec<GroupElement> {
        (0..self.dim()).map(|j| self.basis_element(j)).collect()
    }

    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        self.element(&matrix::add_vec(&a.coords, &b.coords)).expect("length")
    }

    pub fn sub(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        self.element(&matrix::sub_vec(&a.coords, &b.coords)).expect("length")
    }

    pub fn neg(&self, a: &GroupElement) -> GroupElement {
        self.element(&matrix::neg_vec(&a.coords)).expect("length")
    }

    pub fn scale(&self, c: &Int, a: &GroupElement) -> GroupElement {
        self.element(&matrix::scale_vec(c, &a.coords)).expect("length")
    }

    pub fn sum(&self, terms: &[GroupElement]) -> GroupElement {
        terms.iter().fold(self.zero(), |acc, t| self.add(&acc, t))
    }

    /// Order of an element: smallest k >= 1 with k*a = 0, or 0 when infinite.
    pub fn element_order(&self, a: &GroupElement) -> Int {
        let mut ord = Int::one();
        for (c, d) in a.coords.iter().zip(&self.orders) {
            if c.is_zero() {
                continue;
            }
            if d.is_zero() {
                return Int::zero();
            }
            let k = d / c.gcd(d);
            ord = ord.lcm(&k);
        }
        ord
    }

    /// Columns `d_i * e_i` for the finite-order coordinates, used to reduce
    /// linear problems over the group to problems over `Z`.
    pub fn relation_columns(&self) -> IntMat {
        let finite: Vec<(usize, Int)> = self
            .orders
            .iter()
            .enumerate()
            .filter(|(_, d)| !d.is_zero())
            .map(|(i, d)| (i, d.clone()))
            .collect();
        let mut m = IntMat::zeros(self.dim(), finite.len());
        for (j, (i, d)) in finite.iter().enumerate() {
            m[(*i, j)] = d.clone();
        }
        m
    }

    /// Solves `mat * x = b` inside this group (`mat` has `dim` rows). The
    /// value of `x` is a vector over `Z^cols`; congruence is modulo the
    /// group relations.
    pub fn solve_mod(&self, mat: &IntMat, b: &GroupElement) -> Option<Vec<Int>> {
        assert_eq!(mat.rows(), self.dim());
        let stacked = mat.hstack(&self.relation_columns());
        matrix::solve(&stacked, &b.coords).map(|mut sol| {
            sol.truncate(mat.cols());
            sol
        })
    }

    /// Expresses `x` as an integer combination of `gens` inside this group,
    /// if possible.
    pub fn in_span(&self, gens: &[GroupElement], x: &GroupElement) -> Option<Vec<Int>> {
        let mat = IntMat::from_cols(self.dim(), &gens.iter().map(|g| g.coords.clone()).collect::<Vec<_>>());
        self.solve_mod(&mat, x)
    }

    /// Generators of the subgroup `{x : n x = 0}`.
    pub fn torsion_subgroup_gens(&self, n: &Int) -> Vec<GroupElement> {
        let scaling = IntMat::identity(self.dim()).scale(n);
        let hom = GroupHom::new(self.clone(), self.clone(), scaling).expect("shape");
        hom.kernel_gens()
    }

    /// Full torsion subgroup `tor(G)` as a generator list.
    pub fn torsion_gens(&self) -> Vec<GroupElement> {
        self.orders
            .iter()
            .enumerate()
            .filter(|(_, d)| !d.is_zero())
            .map(|(i, _)| self.basis_element(i))
            .collect()
    }

    /// Enumerates every element of the torsion subgroup. Only call on groups
    /// whose torsion part is small; the size is the product of the finite
    /// orders.
    pub fn torsion_elements(&self) -> Vec<GroupElement> {
        let mut out = vec![self.zero()];
        for (i, d) in self.orders.iter().enumerate() {
            if d.is_zero() {
                continue;
            }
            let mut next = Vec::new();
            let mut c = Int::zero();
            while &c < d {
                for e in &out {
                    let mut coords = e.coords.clone();
                    coords[i] = c.clone();
                    next.push(GroupElement { coords });
                }
                c += 1;
            }
            out = next;
        }
        out
    }

    /// Presents the subgroup generated by `gens` abstractly. Returns the
    /// abstract group and the inclusion back into the ambient group.
    pub fn subgroup_abstract(&self, gens: &[GroupElement]) -> (FgGroup, GroupHom) {
        let k = gens.len();
        let mat = IntMat::from_cols(self.dim(), &gens.iter().map(|g| g.coords.clone()).collect::<Vec<_>>());
        // relations among the generators: combinations that die in the ambient
        let stacked = mat.hstack(&self.relation_columns());
        let null = matrix::nullspace(&stacked);
        let relations = IntMat::from_rows(
            null.iter().map(|v| v[..k].to_vec()).collect::<Vec<_>>(),
        );
        let relations = if null.is_empty() { IntMat::zeros(0, k) } else { relations };
        let (group, proj) = FgGroup::from_presentation(relations);
        // inclusion: abstract generator j is the class of some v with
        // proj(v) = e_j; its ambient image is mat * v
        let mut incl_cols = Vec::new();
        for j in 0..group.dim() {
            let target = group.basis_element(j);
            let v = group
                .solve_mod(&proj.matrix, &target)
                .expect("projection is surjective");
            incl_cols.push(self.element(&mat.apply(&v)).expect("length").coords);
        }
        let incl_mat = IntMat::from_cols(self.dim(), &incl_cols);
        let incl = GroupHom::new(group.clone(), self.clone(), incl_mat).expect("shape");
        (group, incl)
    }
}

/// A homomorphism between finitely generated abelian groups, stored as the
/// matrix whose columns are the images of the source generators.
#[derive(Clone, Serialize, Deserialize)]
pub struct GroupHom {
    pub source: FgGroup,
    pub target: FgGroup,
    pub matrix: IntMat,
}

impl fmt::Debug for GroupHom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GroupHom {} -> {} via {:?}", self.source, self.target, self.matrix)
    }
}

impl PartialEq for GroupHom {
    /// Homs are equal when they agree on every generator canonically.
    fn eq(&self, other: &Self) -> bool {
        self.source == other.source
            && self.target == other.target
            && (0..self.source.dim()).all(|j| {
                self.target.element(&self.matrix.col(j)).expect("length")
                    == other.target.element(&other.matrix.col(j)).expect("length")
            })
    }
}

impl Eq for GroupHom {}

impl GroupHom {
    pub fn new(source: FgGroup, target: FgGroup, matrix: IntMat) -> Result<Self, AbelianError> {
        if matrix.rows() != target.dim() || matrix.cols() != source.dim() {
            return Err(AbelianError::ShapeMismatch {
                rows: matrix.rows(),
                cols: matrix.cols(),
                target_dim: target.dim(),
                source_dim: source.dim(),
            });
        }
        Ok(GroupHom { source, target, matrix })
    }

    pub fn identity(group: &FgGroup) -> Self {
        GroupHom::new(group.clone(), group.clone(), IntMat::identity(group.dim())).expect("shape")
    }

    pub fn zero(source: &FgGroup, target: &FgGroup) -> Self {
        GroupHom::new(source.clone(), target.clone(), IntMat::zeros(target.dim(), source.dim()))
            .expect("shape")
    }

    /// Multiplication by `c` as an endomorphism.
    pub fn scaling(group: &FgGroup, c: &Int) -> Self {
        GroupHom::new(group.clone(), group.clone(), IntMat::identity(group.dim()).scale(c))
            .expect("shape")
    }

    pub fn apply(&self, x: &GroupElement) -> GroupElement {
        self.target.element(&self.matrix.apply(&x.coords)).expect("length")
    }

    /// `self` after `first` (i.e. `self ∘ first`).
    pub fn compose(&self, first: &GroupHom) -> GroupHom {
        assert_eq!(first.target, self.source, "composition type mismatch");
        GroupHom::new(first.source.clone(), self.target.clone(), self.matrix.mul(&first.matrix))
            .expect("shape")
    }

    /// Blockwise direct sum of homs.
    pub fn direct_sum(parts: &[GroupHom]) -> GroupHom {
        let source = FgGroup::direct_sum(&parts.iter().map(|p| p.source.clone()).collect::<Vec<_>>());
        let target = FgGroup::direct_sum(&parts.iter().map(|p| p.target.clone()).collect::<Vec<_>>());
        let mut m = IntMat::zeros(target.dim(), source.dim());
        let mut ro = 0;
        let mut co = 0;
        for p in parts {
            for i in 0..p.target.dim() {
                for j in 0..p.source.dim() {
                    m[(ro + i, co + j)] = p.matrix[(i, j)].clone();
                }
            }
            ro += p.target.dim();
            co += p.source.dim();
        }
        GroupHom::new(source, target, m).expect("shape")
    }

    /// True when every source relation maps to zero in the target.
    pub fn is_well_defined(&self) -> bool {
        self.source.orders().iter().enumerate().all(|(j, d)| {
            d.is_zero() || {
                let img = self.target.element(&self.matrix.col(j)).expect("length");
                self.target.scale(d, &img) == self.target.zero()
            }
        })
    }

    /// Generators of the kernel, canonical, sign-normalized (first nonzero
    /// free coordinate positive) and deduplicated.
    pub fn kernel_gens(&self) -> Vec<GroupElement> {
        let stacked = self.matrix.hstack(&self.target.relation_columns());
        let null = matrix::nullspace(&stacked);
        let mut out: Vec<GroupElement> = Vec::new();
        for v in null {
            let mut e = self.source.element(&v[..self.source.dim()]).expect("length");
            let flip = e
                .coords
                .iter()
                .zip(self.source.orders())
                .find(|(c, d)| d.is_zero() && !c.is_zero())
                .is_some_and(|(c, _)| c.is_negative());
            if flip {
                e = self.source.neg(&e);
            }
            if e != self.source.zero() && !out.contains(&e) {
                out.push(e);
            }
        }
        out
    }

    /// Canonical images of the source generators, zero dropped.
    pub fn image_gens(&self) -> Vec<GroupElement> {
        let mut out: Vec<GroupElement> = Vec::new();
        for j in 0..self.source.dim() {
            let e = self.target.element(&self.matrix.col(j)).expect("length");
            if e != self.target.zero() && !out.contains(&e) {
                out.push(e);
            }
        }
        out
    }

    pub fn is_surjective(&self) -> bool {
        let gens = self.image_gens();
        (0..self.target.dim())
            .all(|i| self.target.in_span(&gens, &self.target.basis_element(i)).is_some())
    }

    pub fn is_injective(&self) -> bool {
        self.kernel_gens().is_empty()
    }

    /// A preimage of `y`, if any.
    pub fn preimage(&self, y: &GroupElement) -> Option<GroupElement> {
        self.target
            .solve_mod(&self.matrix, y)
            .map(|v| self.source.element(&v).expect("length"))
    }
}

/// Outcome of analyzing a homomorphism.
#[derive(Clone, Debug)]
pub struct HomAnalysis {
    pub well_defined: bool,
    pub kernel: Vec<GroupElement>,
    pub image: Vec<GroupElement>,
}

/// Well-definedness plus verified kernel and image generators.
pub fn hom_analyze(h: &GroupHom) -> HomAnalysis {
    HomAnalysis {
        well_defined: h.is_well_defined(),
        kernel: h.kernel_gens(),
        image: h.image_gens(),
    }
}

/// The two Bockstein-relevant groups attached to `(G, n)`.
#[derive(Clone, Debug)]
pub struct BocksteinGroups {
    /// `G/nG` together with the quotient map.
    pub quotient: FgGroup,
    pub quotient_map: GroupHom,
    /// Generators of `G[n] = {x : n x = 0}` inside `G`.
    pub torsion_gens: Vec<GroupElement>,
}

/// Computes `G/nG` (with its quotient map) and the n-torsion subgroup `G[n]`.
pub fn bockstein_groups(g: &FgGroup, n: &Int) -> BocksteinGroups {
    assert!(n >= &Int::from(2), "n must be at least 2");
    // relations over the canonical basis: the finite generator orders plus nG
    let mut rows: Vec<Vec<Int>> = Vec::new();
    for (j, d) in g.orders().iter().enumerate() {
        if !d.is_zero() {
            let mut row = vec![Int::zero(); g.dim()];
            row[j] = d.clone();
            rows.push(row);
        }
    }
    rows.extend(IntMat::identity(g.dim()).scale(n).row_vecs());
    let rel = if rows.is_empty() { IntMat::zeros(0, g.dim()) } else { IntMat::from_rows(rows) };
    let (quotient, quotient_map) = FgGroup::from_presentation(rel);
    let quotient_map = GroupHom::new(g.clone(), quotient.clone(), quotient_map.matrix)
        .expect("shape");
    BocksteinGroups { quotient, quotient_map, torsion_gens: g.torsion_subgroup_gens(n) }
}

/// Deterministic bounded enumeration of group elements, graded by total
/// coordinate height and lexicographic within a height level. Free
/// coordinates at height k contribute k then -k; a torsion coordinate of
/// order d at height k contributes k then d-k.
pub fn enumerate_elements(g: &FgGroup, max_height: u64) -> Vec<GroupElement> {
    fn values_at(order: &Int, h: u64) -> Vec<Int> {
        let hi = Int::from(h);
        if order.is_zero() {
            if h == 0 {
                vec![Int::zero()]
            } else {
                vec![hi.clone(), -hi]
            }
        } else {
            // canonical reps in [0, d) with height min(c, d-c)
            if h == 0 {
                return vec![Int::zero()];
            }
            let mut out = Vec::new();
            let two_h = Int::from(2 * h);
            if &two_h <= order {
                out.push(hi.clone());
                let alt = order - &hi;
                if alt != hi {
                    out.push(alt);
                }
            }
            out
        }
    }
    fn rec(
        g: &FgGroup,
        coord: usize,
        remaining: u64,
        prefix: &mut Vec<Int>,
        out: &mut Vec<GroupElement>,
    ) {
        if coord == g.dim() {
            if remaining == 0 {
                out.push(GroupElement { coords: prefix.clone() });
            }
            return;
        }
        for h in 0..=remaining {
            for v in values_at(&g.orders()[coord], h) {
                prefix.push(v);
                rec(g, coord + 1, remaining - h, prefix, out);
                prefix.pop();
            }
        }
    }
    let mut out = Vec::new();
    for total in 0..=max_height {
        let mut prefix = Vec::new();
        rec(g, 0, total, &mut prefix, &mut out);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{int, ints};
    use proptest::prelude::*;

    #[test]
    fn canonical_form_examples() {
        // Z/2 + Z
        let g = FgGroup::from_orders(ints(&[2, 0]));
        assert_eq!(g.element(&ints(&[3, 5])).unwrap().coords, ints(&[1, 5]));
        let z = FgGroup::free(1);
        assert_eq!(z.element(&ints(&[0])).unwrap().coords, ints(&[0]));
        let z4 = FgGroup::cyclic(4);
        assert_eq!(z4.element(&ints(&[-1])).unwrap().coords, ints(&[3]));
        // idempotent
        let e = g.element(&ints(&[3, 5])).unwrap();
        assert_eq!(g.element(&e.coords).unwrap(), e);
        // length mismatch is an error
        assert!(matches!(z4.element(&ints(&[1, 2])), Err(AbelianError::LengthMismatch { .. })));
    }

    #[test]
    fn from_presentation_normalizes() {
        // Z^2 / <(2,0),(0,3)> = Z/6
        let rel = IntMat::from_i64(&[&[2, 0], &[0, 3]]);
        let (g, proj) = FgGroup::from_presentation(rel);
        assert_eq!(g.rank(), 0);
        assert_eq!(g.invariant_factors(), ints(&[6]));
        // every relation maps to zero under the projection
        for row in g.presentation().row_vecs() {
            let img = proj.target.element(&proj.matrix.apply(&row)).unwrap();
            assert_eq!(img, g.zero());
        }
        assert!(proj.is_surjective());
    }

    #[test]
    fn invariant_factors_chain() {
        let g = FgGroup::from_orders(ints(&[2, 3, 4]));
        // Z/2+Z/3+Z/4 = Z/2 + Z/12
        assert_eq!(g.invariant_factors(), ints(&[2, 12]));
        let f = g.invariant_factors();
        for w in f.windows(2) {
            assert!(w[1].mod_floor(&w[0]).is_zero());
        }
    }

    #[test]
    fn bockstein_examples() {
        let z = FgGroup::free(1);
        let b = bockstein_groups(&z, &int(2));
        assert_eq!(b.quotient.invariant_factors(), ints(&[2]));
        assert!(b.torsion_gens.is_empty());

        let z4 = FgGroup::cyclic(4);
        let b = bockstein_groups(&z4, &int(2));
        assert_eq!(b.quotient.invariant_factors(), ints(&[2]));
        assert_eq!(b.torsion_gens, vec![z4.element_i64(&[2])]);

        let z6 = FgGroup::cyclic(6);
        let b = bockstein_groups(&z6, &int(2));
        assert_eq!(b.quotient.invariant_factors(), ints(&[2]));
        assert_eq!(b.torsion_gens, vec![z6.element_i64(&[3])]);
        // contract: n * t = 0 and (quotient map) ∘ (mult by n) = 0
        for t in &b.torsion_gens {
            assert_eq!(z6.scale(&int(2), t), z6.zero());
        }
        let mul2 = GroupHom::scaling(&z6, &int(2));
        let comp = b.quotient_map.compose(&mul2);
        assert_eq!(comp, GroupHom::zero(&z6, &b.quotient));
    }

    #[test]
    fn hom_analyze_examples() {
        let z = FgGroup::free(1);
        let z2 = FgGroup::cyclic(2);
        let z4 = FgGroup::cyclic(4);

        let red = GroupHom::new(z.clone(), z2.clone(), IntMat::from_i64(&[&[1]])).unwrap();
        let a = hom_analyze(&red);
        assert!(a.well_defined);
        assert_eq!(a.kernel, vec![z.element_i64(&[2])]);
        assert_eq!(a.image, vec![z2.element_i64(&[1])]);

        let h = GroupHom::new(z4.clone(), z2.clone(), IntMat::from_i64(&[&[1]])).unwrap();
        let a = hom_analyze(&h);
        assert!(a.well_defined);
        assert_eq!(a.kernel, vec![z4.element_i64(&[2])]);

        let bad = GroupHom::new(z2.clone(), z4.clone(), IntMat::from_i64(&[&[1]])).unwrap();
        assert!(!hom_analyze(&bad).well_defined);
    }

    #[test]
    fn kernel_membership_both_ways() {
        // h: Z^2 -> Z/2, (a,b) -> a+b
        let src = FgGroup::free(2);
        let z2 = FgGroup::cyclic(2);
        let h = GroupHom::new(src.clone(), z2.clone(), IntMat::from_i64(&[&[1, 1]])).unwrap();
        let kernel = h.kernel_gens();
        for k in &kernel {
            assert_eq!(h.apply(k), z2.zero());
        }
        // random elements with h(x) = 0 lie in the kernel span
        for x in enumerate_elements(&src, 3) {
            if h.apply(&x) == z2.zero() {
                assert!(src.in_span(&kernel, &x).is_some(), "missed kernel member {x}");
            }
        }
    }

    #[test]
    fn subgroup_abstract_roundtrip() {
        let g = FgGroup::from_orders(ints(&[0, 4]));
        let gens = vec![g.element_i64(&[2, 1])];
        let (sub, incl) = g.subgroup_abstract(&gens);
        // the abstract group embeds onto the span of the generators
        for j in 0..sub.dim() {
            let img = incl.apply(&sub.basis_element(j));
            assert!(g.in_span(&gens, &img).is_some());
        }
        for gen in &gens {
            let pre = incl.preimage(gen);
            assert!(pre.is_some());
        }
        assert!(incl.is_injective());
    }

    #[test]
    fn enumerate_is_graded_and_duplicate_free() {
        let g = FgGroup::from_orders(ints(&[0, 3]));
        let all = enumerate_elements(&g, 2);
        let mut seen = std::collections::HashSet::new();
        for e in &all {
            assert!(seen.insert(e.clone()), "duplicate {e}");
        }
        assert!(all.contains(&g.element_i64(&[-2, 0])));
        assert!(all.contains(&g.element_i64(&[1, 2])));
        assert_eq!(all[0], g.zero());
    }

    proptest! {
        #[test]
        fn canonical_addition_compatible(a in proptest::collection::vec(-20i64..20, 3),
                                         b in proptest::collection::vec(-20i64..20, 3)) {
            let g = FgGroup::from_orders(ints(&[0, 4, 6]));
            let ea = g.element_i64(&[a[0], a[1], a[2]]);
            let eb = g.element_i64(&[b[0], b[1], b[2]]);
            let direct = g.element(&matrix::add_vec(
                &ints(&[a[0], a[1], a[2]]),
                &ints(&[b[0], b[1], b[2]]),
            )).unwrap();
            prop_assert_eq!(g.add(&ea, &eb), direct);
        }

        #[test]
        fn element_order_kills(c in proptest::collection::vec(-10i64..10, 2)) {
            let g = FgGroup::from_orders(ints(&[4, 6]));
            let e = g.element_i64(&[c[0], c[1]]);
            let ord = g.element_order(&e);
            prop_assert!(!ord.is_zero());
            prop_assert_eq!(g.scale(&ord, &e), g.zero());
        }
    }
}
