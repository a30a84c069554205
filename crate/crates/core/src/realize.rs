//! Realization of complexes as inductive limits of building-block sums:
//! hitting a positive element through a block sum, factoring a morphism
//! through a block sum with kernel control, assembling the zig-zag limit
//! construction, and normalizing systems to large denominators.

use crate::abelian::{FgGroup, GroupElement, GroupHom};
use crate::budget::{Budget, BudgetExhausted};
use crate::complex::{
    building_block, direct_sum, find_complex_iso, verify_morphism, BlockKind, BlockLabel,
    ComplexError, ComplexMorphism, NCoefficientComplex, SumLayout, Triple,
};
use crate::matrix::IntMat;
use crate::Int;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RealizeError {
    #[error("triple {0} is not positive in the target")]
    NotPositive(String),
    #[error("factorization failed: {0}")]
    Factorization(String),
    #[error("target not recognized as a block sum: {0}")]
    Unrecognized(String),
    #[error("large-denominators predicate unachievable: {0}")]
    PredicateUnachievable(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error(transparent)]
    Budget(#[from] BudgetExhausted),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

/// A labelled finite direct sum of building blocks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stage {
    pub labels: Vec<BlockLabel>,
    pub complex: NCoefficientComplex,
    pub layout: SumLayout,
}

impl Stage {
    pub fn modulus(&self) -> u64 {
        self.complex.n
    }
}

/// Builds the labelled block sum of the given blocks.
pub fn block_sum(labels: &[BlockLabel]) -> Result<Stage, ComplexError> {
    let parts: Vec<NCoefficientComplex> =
        labels.iter().map(|&l| building_block(l)).collect::<Result<_, _>>()?;
    let (complex, layout) = direct_sum(&parts)?;
    Ok(Stage { labels: labels.to_vec(), complex, layout })
}

/// Inclusion of a sub-multiset of blocks (given by indices into `labels`)
/// as a morphism into the full stage.
fn sub_stage_inclusion(stage: &Stage, keep: &[usize]) -> Result<(Stage, ComplexMorphism), ComplexError> {
    let labels: Vec<BlockLabel> = keep.iter().map(|&i| stage.labels[i]).collect();
    let sub = block_sum(&labels)?;
    let place = |dim_to: usize, to: &[(usize, usize)], from: &[(usize, usize)], src_dim: usize| {
        let mut m = IntMat::zeros(dim_to, src_dim);
        for (pos, &orig) in keep.iter().enumerate() {
            let (t_off, t_len) = to[orig];
            let (s_off, s_len) = from[pos];
            debug_assert_eq!(t_len, s_len);
            for k in 0..t_len {
                m[(t_off + k, s_off + k)] = Int::from(1);
            }
        }
        m
    };
    let theta0 = GroupHom::new(
        sub.complex.g0.clone(),
        stage.complex.g0.clone(),
        place(stage.complex.g0.dim(), &stage.layout.g0, &sub.layout.g0, sub.complex.g0.dim()),
    )
    .expect("shape");
    let thetan = GroupHom::new(
        sub.complex.gn.clone(),
        stage.complex.gn.clone(),
        place(stage.complex.gn.dim(), &stage.layout.gn, &sub.layout.gn, sub.complex.gn.dim()),
    )
    .expect("shape");
    let theta1 = GroupHom::new(
        sub.complex.g1.clone(),
        stage.complex.g1.clone(),
        place(stage.complex.g1.dim(), &stage.layout.g1, &sub.layout.g1, sub.complex.g1.dim()),
    )
    .expect("shape");
    Ok((sub, ComplexMorphism { theta0, thetan, theta1 }))
}

/// An inductive system of block sums with verified connecting morphisms.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BlockSystem {
    pub stages: Vec<Stage>,
    pub connects: Vec<ComplexMorphism>,
}

impl BlockSystem {
    /// Composite of the connecting morphisms from stage `i` to stage `j`.
    pub fn composite(&self, i: usize, j: usize) -> ComplexMorphism {
        assert!(i <= j && j < self.stages.len());
        let mut m = ComplexMorphism::identity(&self.stages[i].complex);
        for k in i..j {
            m = self.connects[k].compose(&m);
        }
        m
    }
}

/// Result of hitting one positive element.
#[derive(Clone, Debug)]
pub struct Hit {
    pub stage: Stage,
    pub theta: ComplexMorphism,
    pub preimage: Triple,
}

/// Factors a positive triple of the target through a small block sum:
/// a circle block when the coefficient part vanishes, a dimension-drop
/// block when the odd part vanishes, and a factored sum of both otherwise.
pub fn hit_positive(
    target_stage: &Stage,
    t: &Triple,
    budget: &Budget,
) -> Result<Hit, RealizeError> {
    let target = &target_stage.complex;
    if !target.is_positive_triple(t, budget).is_yes() {
        return Err(RealizeError::NotPositive(t.to_string()));
    }
    let n = target.n;

    let circle_hit = |e: &GroupElement, g: &GroupElement| -> Result<Hit, RealizeError> {
        let stage = block_sum(&[BlockLabel { kind: BlockKind::Circle, n }])?;
        let h = &stage.complex;
        let rho_e = target.rho.apply(e);
        let theta = ComplexMorphism {
            theta0: GroupHom::new(h.g0.clone(), target.g0.clone(), IntMat::from_cols(target.g0.dim(), &[e.coords.clone()])).expect("shape"),
            thetan: GroupHom::new(h.gn.clone(), target.gn.clone(), IntMat::from_cols(target.gn.dim(), &[rho_e.coords])).expect("shape"),
            theta1: GroupHom::new(h.g1.clone(), target.g1.clone(), IntMat::from_cols(target.g1.dim(), &[g.coords.clone()])).expect("shape"),
        };
        let preimage = h.triple(&[1], &[0], &[1]);
        Ok(Hit { stage, theta, preimage })
    };
    let dimdrop_hit = |e: &GroupElement, f: &GroupElement| -> Result<Hit, RealizeError> {
        let stage = block_sum(&[BlockLabel { kind: BlockKind::DimDrop(n), n }])?;
        let h = &stage.complex;
        let rho_e = target.rho.apply(e);
        let beta_f = target.beta.apply(f);
        let theta = ComplexMorphism {
            theta0: GroupHom::new(h.g0.clone(), target.g0.clone(), IntMat::from_cols(target.g0.dim(), &[e.coords.clone()])).expect("shape"),
            thetan: GroupHom::new(h.gn.clone(), target.gn.clone(), IntMat::from_cols(target.gn.dim(), &[rho_e.coords, f.coords.clone()])).expect("shape"),
            theta1: GroupHom::new(h.g1.clone(), target.g1.clone(), IntMat::from_cols(target.g1.dim(), &[beta_f.coords])).expect("shape"),
        };
        let preimage = h.triple(&[1], &[0, 1], &[0]);
        Ok(Hit { stage, theta, preimage })
    };

    let hit = if t.y == target.gn.zero() {
        circle_hit(&t.x, &t.z)?
    } else if t.z == target.g1.zero() {
        dimdrop_hit(&t.x, &t.y)?
    } else {
        // general case: factor the sum of the two special hits
        let hf = dimdrop_hit(&t.x, &t.y)?;
        let hg = circle_hit(&t.x, &t.z)?;
        let labels: Vec<BlockLabel> =
            hf.stage.labels.iter().chain(&hg.stage.labels).copied().collect();
        let w = block_sum(&labels)?;
        let theta = ComplexMorphism::sum_into(&[hf.theta, hg.theta]);
        let factored = factor_through_target(&w, &theta, target_stage, budget)?;
        // positive preimage: even from the dimension-drop side (the two even
        // generators agree after factoring since their difference dies),
        // coefficient from the dimension-drop side, odd from the circle side
        let u = Triple {
            x: w.complex.g0.element_i64(&[1, 0]),
            y: w.complex.gn.element_i64(&[0, 1, 0]),
            z: w.complex.g1.element_i64(&[0, 1]),
        };
        let p = factored.gamma.apply(&u);
        Hit { stage: factored.stage, theta: factored.lambda, preimage: p }
    };

    // certificates: the preimage is positive and maps onto the triple
    if !hit.stage.complex.is_positive_triple(&hit.preimage, budget).is_yes() {
        return Err(RealizeError::Verification(format!(
            "hit preimage {} is not positive",
            hit.preimage
        )));
    }
    if hit.theta.apply(&hit.preimage) != *t {
        return Err(RealizeError::Verification("hit preimage does not map onto the triple".into()));
    }
    let chk = verify_morphism(&hit.theta, &hit.stage.complex, target, 1, budget);
    if !chk.report.all_pass() {
        return Err(RealizeError::Verification(format!("hit morphism fails: {}", chk.report)));
    }
    Ok(hit)
}

/// Result of factoring `theta` through a block sum.
#[derive(Clone, Debug)]
pub struct Factored {
    pub stage: Stage,
    pub gamma: ComplexMorphism,
    pub lambda: ComplexMorphism,
}

/// Factors `theta: W -> target` through a sub-sum of the target's blocks,
/// searched in increasing size. `lambda . gamma = theta` holds exactly and
/// `ker gamma = ker theta` is certified by membership in both directions.
pub fn factor_through_target(
    w: &Stage,
    theta: &ComplexMorphism,
    target: &Stage,
    budget: &Budget,
) -> Result<Factored, RealizeError> {
    let blocks = target.labels.len();
    // enumerate index subsets by ascending size, lexicographic within a size
    let mut subsets: Vec<Vec<usize>> = (0..1u32 << blocks)
        .map(|mask| (0..blocks).filter(|&i| mask >> i & 1 == 1).collect())
        .collect();
    subsets.sort_by_key(|s: &Vec<usize>| (s.len(), s.clone()));
    'cand: for keep in subsets {
        budget.tick()?;
        let Ok((sub, incl)) = sub_stage_inclusion(target, &keep) else { continue };
        // gamma generator images are inclusion preimages of theta images
        let lift = |h: &GroupHom, incl_h: &GroupHom, sub_g: &FgGroup| -> Option<GroupHom> {
            let mut cols = Vec::new();
            for j in 0..h.source.dim() {
                let img = h.apply(&h.source.basis_element(j));
                cols.push(incl_h.preimage(&img)?.coords);
            }
            GroupHom::new(h.source.clone(), sub_g.clone(), IntMat::from_cols(sub_g.dim(), &cols)).ok()
        };
        let Some(g0) = lift(&theta.theta0, &incl.theta0, &sub.complex.g0) else { continue 'cand };
        let Some(gn) = lift(&theta.thetan, &incl.thetan, &sub.complex.gn) else { continue 'cand };
        let Some(g1) = lift(&theta.theta1, &incl.theta1, &sub.complex.g1) else { continue 'cand };
        let gamma = ComplexMorphism { theta0: g0, thetan: gn, theta1: g1 };
        // exact contract checks
        let composed = incl.compose(&gamma);
        if composed != *theta {
            continue;
        }
        let gchk = verify_morphism(&gamma, &w.complex, &sub.complex, 1, budget);
        if !gchk.report.all_pass() {
            continue;
        }
        // kernel equality, certified in both directions
        let tk0 = theta.theta0.kernel_gens();
        let tkn = theta.thetan.kernel_gens();
        let tk1 = theta.theta1.kernel_gens();
        let pairs = [
            (&gchk.kernel0, &tk0, &w.complex.g0),
            (&gchk.kerneln, &tkn, &w.complex.gn),
            (&gchk.kernel1, &tk1, &w.complex.g1),
        ];
        for (gk, tk, group) in pairs {
            for k in tk.iter() {
                if gk.is_empty() {
                    if gamma_kills(&gamma, group, k, &w.complex) {
                        continue;
                    }
                    continue 'cand;
                }
                if group.in_span(gk, k).is_none() {
                    continue 'cand;
                }
            }
            for k in gk.iter() {
                if tk.is_empty() {
                    if theta_kills(theta, group, k, &w.complex) {
                        continue;
                    }
                    continue 'cand;
                }
                if group.in_span(tk, k).is_none() {
                    continue 'cand;
                }
            }
        }
        return Ok(Factored { stage: sub, gamma, lambda: incl });
    }
    Err(RealizeError::Factorization(format!(
        "no sub-sum of the target factors the morphism; kernel generators: [{}] [{}] [{}]",
        fmt_gens(&theta.theta0.kernel_gens()),
        fmt_gens(&theta.thetan.kernel_gens()),
        fmt_gens(&theta.theta1.kernel_gens()),
    )))
}

fn fmt_gens(gens: &[GroupElement]) -> String {
    gens.iter().map(|g| g.to_string()).collect::<Vec<_>>().join(", ")
}

fn gamma_kills(gamma: &ComplexMorphism, group: &FgGroup, k: &GroupElement, w: &NCoefficientComplex) -> bool {
    if std::ptr::eq(group, &w.g0) {
        gamma.theta0.apply(k) == gamma.theta0.target.zero()
    } else if std::ptr::eq(group, &w.gn) {
        gamma.thetan.apply(k) == gamma.thetan.target.zero()
    } else {
        gamma.theta1.apply(k) == gamma.theta1.target.zero()
    }
}

fn theta_kills(theta: &ComplexMorphism, group: &FgGroup, k: &GroupElement, w: &NCoefficientComplex) -> bool {
    if std::ptr::eq(group, &w.g0) {
        theta.theta0.apply(k) == theta.theta0.target.zero()
    } else if std::ptr::eq(group, &w.gn) {
        theta.thetan.apply(k) == theta.thetan.target.zero()
    } else {
        theta.theta1.apply(k) == theta.theta1.target.zero()
    }
}

/// One verified hit certificate of the realization.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HitCertificate {
    pub index: usize,
    pub target_triple: Triple,
    pub stage_preimage: Triple,
}

/// A finite initial segment of the limit realization.
#[derive(Clone, Debug)]
pub struct Realization {
    pub system: BlockSystem,
    /// Morphisms from each stage to the target; all triangles commute.
    pub lambdas: Vec<ComplexMorphism>,
    pub hits: Vec<HitCertificate>,
}

/// Recognizes a complex as order-isomorphic to a labelled block sum, by a
/// bounded search over label multisets and component isomorphisms.
pub fn recognize_block_sum(
    x: &NCoefficientComplex,
    budget: &Budget,
) -> Option<(Stage, ComplexMorphism, ComplexMorphism)> {
    if x.g0.rank() != x.g0.dim() {
        return None;
    }
    let r = x.g0.rank();
    if r == 0 {
        return None;
    }
    let n = x.n;
    let mut kinds = vec![BlockKind::C, BlockKind::Circle];
    for m in 2..=n {
        if n % m == 0 {
            kinds.push(BlockKind::DimDrop(m));
        }
    }
    // multisets of size r over the kinds, nondecreasing index sequences
    let mut picks = vec![0usize; r];
    loop {
        if budget.tick().is_err() {
            return None;
        }
        let labels: Vec<BlockLabel> =
            picks.iter().map(|&i| BlockLabel { kind: kinds[i], n }).collect();
        if let Ok(stage) = block_sum(&labels) {
            let c = &stage.complex;
            if c.gn.invariant_factors() == x.gn.invariant_factors()
                && c.g1.invariant_factors() == x.g1.invariant_factors()
                && c.g1.rank() == x.g1.rank()
            {
                if let Some((fwd, bwd)) = find_complex_iso(c, x, 2, budget) {
                    return Some((stage, fwd, bwd));
                }
            }
        }
        // advance nondecreasing multiset odometer
        let mut k = r;
        loop {
            if k == 0 {
                return None;
            }
            k -= 1;
            if picks[k] + 1 < kinds.len() {
                picks[k] += 1;
                for j in k + 1..r {
                    picks[j] = picks[k];
                }
                break;
            }
        }
    }
}

/// Realizes the first `steps` enumerated positives of a block-sum target by
/// the alternating hit / factor construction. Every triangle commutes
/// exactly and every hit carries a verified positive preimage.
pub fn realize_limit_stage(
    target: &Stage,
    steps: usize,
    max_height: u64,
    budget: &Budget,
) -> Result<Realization, RealizeError> {
    let mut height = max_height;
    let mut positives = target.complex.enumerate_positive_triples(height, budget);
    while positives.len() < steps {
        budget.tick()?;
        height += 1;
        if height > max_height + 16 {
            return Err(RealizeError::Verification(format!(
                "only {} positives enumerated up to height {height}, need {steps}",
                positives.len()
            )));
        }
        positives = target.complex.enumerate_positive_triples(height, budget);
    }
    let mut stages: Vec<Stage> = Vec::new();
    let mut connects: Vec<ComplexMorphism> = Vec::new();
    let mut lambdas: Vec<ComplexMorphism> = Vec::new();
    let mut hits: Vec<HitCertificate> = Vec::new();

    for (i, t) in positives.iter().take(steps).enumerate() {
        let hit = hit_positive(target, t, budget)?;
        let (w, theta, incl_prev, incl_hit) = match stages.last() {
            None => {
                let w = hit.stage.clone();
                let theta = hit.theta.clone();
                let id = ComplexMorphism::identity(&w.complex);
                (w, theta, None, id)
            }
            Some(prev) => {
                let labels: Vec<BlockLabel> =
                    prev.labels.iter().chain(&hit.stage.labels).copied().collect();
                let w = block_sum(&labels)?;
                let theta = ComplexMorphism::sum_into(&[
                    lambdas.last().expect("aligned").clone(),
                    hit.theta.clone(),
                ]);
                let prev_keep: Vec<usize> = (0..prev.labels.len()).collect();
                let hit_keep: Vec<usize> =
                    (prev.labels.len()..labels.len()).collect();
                let (_, incl_prev) = sub_stage_inclusion(&w, &prev_keep)?;
                let (_, incl_hit) = sub_stage_inclusion(&w, &hit_keep)?;
                (w, theta, Some(incl_prev), incl_hit)
            }
        };
        let factored = factor_through_target(&w, &theta, target, budget)?;
        // connect = gamma after the inclusion of the previous stage
        if let Some(prev_incl) = incl_prev {
            let connect = factored.gamma.compose(&prev_incl);
            // triangle: lambda_i . connect = lambda_{i-1}, exactly
            let back = factored.lambda.compose(&connect);
            if back != *lambdas.last().expect("aligned") {
                return Err(RealizeError::Verification("triangle does not commute".into()));
            }
            connects.push(connect);
        }
        // hit certificate at this stage
        let preimage = factored.gamma.compose(&incl_hit).apply(&hit.preimage);
        if factored.lambda.apply(&preimage) != *t {
            return Err(RealizeError::Verification("hit certificate does not map onto its triple".into()));
        }
        if !factored.stage.complex.is_positive_triple(&preimage, budget).is_yes() {
            return Err(RealizeError::Verification("hit certificate is not positive".into()));
        }
        hits.push(HitCertificate { index: i, target_triple: t.clone(), stage_preimage: preimage });
        stages.push(factored.stage);
        lambdas.push(factored.lambda);
    }
    Ok(Realization { system: BlockSystem { stages, connects }, lambdas, hits })
}

/// Realizes a general complex by first recognizing a block-sum avatar and
/// transporting the realization through the isomorphism.
pub fn realize_limit(
    target: &NCoefficientComplex,
    steps: usize,
    max_height: u64,
    budget: &Budget,
) -> Result<Realization, RealizeError> {
    let (avatar, fwd, _bwd) = recognize_block_sum(target, budget)
        .ok_or_else(|| RealizeError::Unrecognized("no block-sum avatar found".into()))?;
    let mut real = realize_limit_stage(&avatar, steps, max_height, budget)?;
    // transport: post-compose every lambda with the avatar isomorphism
    for (lam, hit) in real.lambdas.iter_mut().zip(&mut real.hits) {
        *lam = fwd.compose(lam);
        hit.target_triple = fwd.apply(&hit.target_triple);
    }
    Ok(real)
}

/// The large-denominators predicate for one connecting morphism between two
/// labelled stages: every block pair with a nonzero odd component has even
/// multiplicity at least `threshold`.
pub fn large_denominators_ok(
    from: &Stage,
    to: &Stage,
    connect: &ComplexMorphism,
    threshold: &Int,
) -> bool {
    for (a, &(a1_off, a1_len)) in from.layout.g1.iter().enumerate() {
        for (b, &(b1_off, b1_len)) in to.layout.g1.iter().enumerate() {
            let odd_nonzero = (0..b1_len).any(|i| {
                (0..a1_len).any(|j| !connect.theta1.matrix[(b1_off + i, a1_off + j)].is_zero())
            });
            if odd_nonzero {
                let (ae, _) = from.layout.g0[a];
                let (be, _) = to.layout.g0[b];
                if &connect.theta0.matrix[(be, ae)] < threshold {
                    return false;
                }
            }
        }
    }
    true
}

/// True when every connecting morphism satisfies the predicate.
pub fn system_has_large_denominators(system: &BlockSystem) -> bool {
    let two = Int::from(2);
    system
        .connects
        .iter()
        .enumerate()
        .all(|(i, c)| large_denominators_ok(&system.stages[i], &system.stages[i + 1], c, &two))
}

/// Compresses an inductive system until every connecting morphism is zero
/// on the odd part or has even multiplicity at least 2. Reports failure when
/// no compression within the budget achieves the predicate.
pub fn enforce_large_denominators(
    system: &BlockSystem,
    budget: &Budget,
) -> Result<BlockSystem, RealizeError> {
    if system.stages.len() <= 1 || system_has_large_denominators(system) {
        return Ok(system.clone());
    }
    let two = Int::from(2);
    // greedy compression: extend each composite until it satisfies the
    // predicate, then emit a stage boundary
    let mut kept = vec![0usize];
    let mut cursor = 0usize;
    while cursor + 1 < system.stages.len() {
        budget.tick()?;
        let mut next = cursor + 1;
        let mut found = None;
        while next < system.stages.len() {
            budget.tick()?;
            let comp = system.composite(cursor, next);
            if large_denominators_ok(&system.stages[cursor], &system.stages[next], &comp, &two) {
                found = Some(next);
                break;
            }
            next += 1;
        }
        match found {
            Some(next) => {
                kept.push(next);
                cursor = next;
            }
            None => {
                return Err(RealizeError::PredicateUnachievable(format!(
                    "no composite from stage {cursor} satisfies the predicate; the odd part \
                     survives with even multiplicity 1 under every compression"
                )));
            }
        }
    }
    let stages: Vec<Stage> = kept.iter().map(|&i| system.stages[i].clone()).collect();
    let connects: Vec<ComplexMorphism> =
        kept.windows(2).map(|w| system.composite(w[0], w[1])).collect();
    let out = BlockSystem { stages, connects };
    if !system_has_large_denominators(&out) {
        return Err(RealizeError::Verification("compressed system fails the predicate".into()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::extend_to_complex;
    use crate::order::GradedOrderedGroup;

    fn b() -> Budget {
        Budget::new(20_000_000)
    }

    fn label(kind: BlockKind, n: u64) -> BlockLabel {
        BlockLabel { kind, n }
    }

    #[test]
    fn hit_examples() {
        // circle target, f = 0
        let target = block_sum(&[label(BlockKind::Circle, 2)]).unwrap();
        let t = target.complex.triple(&[1], &[0], &[1]);
        let hit = hit_positive(&target, &t, &b()).unwrap();
        assert_eq!(hit.stage.labels, vec![label(BlockKind::Circle, 2)]);
        assert_eq!(hit.theta.apply(&hit.preimage), t);

        // dimension-drop target, g = 0: identity-shaped hit
        let target = block_sum(&[label(BlockKind::DimDrop(2), 2)]).unwrap();
        let t = target.complex.triple(&[1], &[0, 1], &[0]);
        let hit = hit_positive(&target, &t, &b()).unwrap();
        assert_eq!(hit.stage.labels, vec![label(BlockKind::DimDrop(2), 2)]);
        assert_eq!(hit.theta.apply(&hit.preimage), t);

        // mixed triple over a two-block target
        let target =
            block_sum(&[label(BlockKind::DimDrop(2), 2), label(BlockKind::Circle, 2)]).unwrap();
        let t = target.complex.triple(&[1, 1], &[0, 1, 1], &[0, 2]);
        assert!(target.complex.is_positive_triple(&t, &b()).is_yes());
        let hit = hit_positive(&target, &t, &b()).unwrap();
        assert_eq!(hit.theta.apply(&hit.preimage), t);
        assert!(hit.stage.complex.is_positive_triple(&hit.preimage, &b()).is_yes());
    }

    #[test]
    fn factor_examples() {
        // identity on a block sum factors through the whole target
        let g = block_sum(&[label(BlockKind::C, 2), label(BlockKind::C, 2)]).unwrap();
        let theta = ComplexMorphism::identity(&g.complex);
        let f = factor_through_target(&g, &theta, &g, &b()).unwrap();
        assert_eq!(f.stage.labels, g.labels);

        // (S1,2) -> (C,2): gamma kills the odd part, kernel matches theta's
        let s12 = block_sum(&[label(BlockKind::Circle, 2)]).unwrap();
        let c2 = block_sum(&[label(BlockKind::C, 2)]).unwrap();
        let theta = ComplexMorphism {
            theta0: GroupHom::identity(&s12.complex.g0),
            thetan: GroupHom::new(
                s12.complex.gn.clone(),
                c2.complex.gn.clone(),
                IntMat::from_i64(&[&[1]]),
            )
            .unwrap(),
            theta1: GroupHom::zero(&s12.complex.g1, &c2.complex.g1),
        };
        let f = factor_through_target(&s12, &theta, &c2, &b()).unwrap();
        assert_eq!(f.stage.labels, vec![label(BlockKind::C, 2)]);
        assert_eq!(f.gamma.theta1.kernel_gens(), theta.theta1.kernel_gens());

        // diagonal (C,2) -> (C,2)+(C,2) needs the full target
        let w = block_sum(&[label(BlockKind::C, 2)]).unwrap();
        let target = block_sum(&[label(BlockKind::C, 2), label(BlockKind::C, 2)]).unwrap();
        let theta = ComplexMorphism {
            theta0: GroupHom::new(
                w.complex.g0.clone(),
                target.complex.g0.clone(),
                IntMat::from_i64(&[&[1], &[1]]),
            )
            .unwrap(),
            thetan: GroupHom::new(
                w.complex.gn.clone(),
                target.complex.gn.clone(),
                IntMat::from_i64(&[&[1], &[1]]),
            )
            .unwrap(),
            theta1: GroupHom::zero(&w.complex.g1, &target.complex.g1),
        };
        let f = factor_through_target(&w, &theta, &target, &b()).unwrap();
        assert_eq!(f.stage.labels.len(), 2);
        assert!(f.gamma.theta0.kernel_gens().is_empty());
    }

    #[test]
    fn realize_single_blocks() {
        for kind in [BlockKind::C, BlockKind::Circle, BlockKind::DimDrop(2)] {
            let target = block_sum(&[label(kind, 2)]).unwrap();
            let real = realize_limit_stage(&target, 4, 2, &b()).unwrap();
            assert_eq!(real.hits.len(), 4);
            for (i, lam) in real.lambdas.iter().enumerate() {
                let chk = verify_morphism(lam, &real.system.stages[i].complex, &target.complex, 1, &b());
                assert!(chk.report.all_pass(), "stage {i}: {}", chk.report);
            }
            // triangles commute
            for i in 0..real.system.connects.len() {
                let via = real.lambdas[i + 1].compose(&real.system.connects[i]);
                assert_eq!(via, real.lambdas[i]);
            }
        }
    }

    #[test]
    fn realize_mixed_sum() {
        let target =
            block_sum(&[label(BlockKind::DimDrop(2), 2), label(BlockKind::C, 2)]).unwrap();
        let real = realize_limit_stage(&target, 5, 1, &b()).unwrap();
        assert_eq!(real.hits.len(), 5);
        for hit in &real.hits {
            let lam = &real.lambdas[hit.index];
            assert_eq!(lam.apply(&hit.stage_preimage), hit.target_triple);
        }
    }

    #[test]
    fn recognize_extend_as_dimdrop() {
        let gstar = GradedOrderedGroup::strict(FgGroup::free(1), FgGroup::cyclic(2));
        let x = extend_to_complex(&gstar, 2, &b()).unwrap();
        let (stage, fwd, bwd) = recognize_block_sum(&x, &b()).unwrap();
        assert_eq!(stage.labels, vec![label(BlockKind::DimDrop(2), 2)]);
        // the isos are mutually inverse on generators
        for j in 0..x.gn.dim() {
            let e = x.gn.basis_element(j);
            assert_eq!(fwd.thetan.apply(&bwd.thetan.apply(&e)), e);
        }
    }

    #[test]
    fn realize_extended_target() {
        let gstar = GradedOrderedGroup::strict(FgGroup::free(1), FgGroup::cyclic(2));
        let x = extend_to_complex(&gstar, 2, &b()).unwrap();
        let real = realize_limit(&x, 3, 1, &b()).unwrap();
        assert_eq!(real.hits.len(), 3);
        for hit in &real.hits {
            let lam = &real.lambdas[hit.index];
            assert_eq!(lam.apply(&hit.stage_preimage), hit.target_triple);
            assert!(x.is_positive_triple(&hit.target_triple, &b()).is_yes());
        }
    }

    #[test]
    fn large_denominators_checks() {
        // all odd components zero: predicate holds vacuously
        let c2 = block_sum(&[label(BlockKind::C, 2)]).unwrap();
        let sys = BlockSystem {
            stages: vec![c2.clone(), c2.clone()],
            connects: vec![ComplexMorphism::identity(&c2.complex)],
        };
        assert!(system_has_large_denominators(&sys));
        let out = enforce_large_denominators(&sys, &b()).unwrap();
        assert_eq!(out.stages.len(), 2);

        // circle with multiplication by 2 on evens passes
        let s12 = block_sum(&[label(BlockKind::Circle, 2)]).unwrap();
        let double = ComplexMorphism {
            theta0: GroupHom::new(s12.complex.g0.clone(), s12.complex.g0.clone(), IntMat::from_i64(&[&[2]])).unwrap(),
            thetan: GroupHom::new(s12.complex.gn.clone(), s12.complex.gn.clone(), IntMat::from_i64(&[&[2]])).unwrap(),
            theta1: GroupHom::identity(&s12.complex.g1),
        };
        let sys = BlockSystem {
            stages: vec![s12.clone(), s12.clone()],
            connects: vec![double],
        };
        assert!(system_has_large_denominators(&sys));

        // circle identity system: no compression can work, reported loudly
        let sys = BlockSystem {
            stages: vec![s12.clone(), s12.clone(), s12.clone()],
            connects: vec![
                ComplexMorphism::identity(&s12.complex),
                ComplexMorphism::identity(&s12.complex),
            ],
        };
        assert!(matches!(
            enforce_large_denominators(&sys, &b()),
            Err(RealizeError::PredicateUnachievable(_))
        ));
    }

    #[test]
    fn compression_fixes_alternating_system() {
        // doubling then identity: single steps fail, composites pass
        let s12 = block_sum(&[label(BlockKind::Circle, 2)]).unwrap();
        let double = ComplexMorphism {
            theta0: GroupHom::new(s12.complex.g0.clone(), s12.complex.g0.clone(), IntMat::from_i64(&[&[2]])).unwrap(),
            thetan: GroupHom::new(s12.complex.gn.clone(), s12.complex.gn.clone(), IntMat::from_i64(&[&[2]])).unwrap(),
            theta1: GroupHom::identity(&s12.complex.g1),
        };
        let idm = ComplexMorphism::identity(&s12.complex);
        let sys = BlockSystem {
            stages: vec![s12.clone(), s12.clone(), s12.clone(), s12.clone(), s12.clone()],
            connects: vec![idm.clone(), double.clone(), idm.clone(), double.clone()],
        };
        assert!(!system_has_large_denominators(&sys));
        let out = enforce_large_denominators(&sys, &b()).unwrap();
        assert!(system_has_large_denominators(&out));
        assert!(out.stages.len() < sys.stages.len());
    }
}
