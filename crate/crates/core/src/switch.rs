//! Switching sets and superswitching elements.
//!
//! A set `Σ` (never containing the identity) is switching for a set `Z` when
//! the only way to satisfy `σ z = z' σ'` with `z, z' ∈ Z` and `σ, σ' ∈ Σ` is
//! `z = z' = e`. An element `σ` is superswitching for `Z` when the pair
//! `{σ, σ⁻¹}` is switching, which reduces to scanning `σ x σ^±1 ∈ Z` over
//! `x ∈ Z`. ICC groups contain infinitely many superswitchers for every
//! finite `Z`, so a breadth-first search over the group is guaranteed to
//! terminate; running out of budget is a capacity condition, never a proof
//! of absence.

use std::collections::{HashMap, HashSet, VecDeque};
use std::io::Write;

use thiserror::Error;

use crate::group::{GroupElement, GroupError, GroupModel};

#[derive(Debug, Error)]
pub enum SwitchError {
    #[error("switching set must not contain the identity")]
    IdentityInSigma,
    #[error("search budget of {budget} candidates exhausted (frontier size {frontier})")]
    BudgetExhausted { budget: usize, frontier: usize },
    #[error("the two switching-set decision routes disagree; this is a bug")]
    RouteMismatch,
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// A witnessed failure: `sigma * z = z_prime * sigma_prime` with
/// `(z, z_prime) != (e, e)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SwitchViolation {
    pub sigma: GroupElement,
    pub z: GroupElement,
    pub z_prime: GroupElement,
    pub sigma_prime: GroupElement,
}

/// Decides whether `sigma` is switching for `z`, scanning all quadruples via
/// a hash join and cross-checking with the equivalent set-intersection form
/// `Σ·Ż ∩ Z·Σ = ∅ = Σ·Z ∩ Ż·Σ` (`Ż` is `Z` with the identity removed).
pub fn is_switching_set(
    model: &GroupModel,
    sigma: &[GroupElement],
    z: &[GroupElement],
) -> Result<Result<(), SwitchViolation>, SwitchError> {
    let e = model.identity();
    if sigma.contains(&e) {
        return Err(SwitchError::IdentityInSigma);
    }

    // Right-hand products z' σ', indexed by value.
    let mut rhs: HashMap<GroupElement, Vec<(usize, usize)>> = HashMap::new();
    for (zi, z_prime) in z.iter().enumerate() {
        for (si, s_prime) in sigma.iter().enumerate() {
            rhs.entry(model.multiply(z_prime, s_prime)?)
                .or_default()
                .push((zi, si));
        }
    }

    let mut witness: Option<SwitchViolation> = None;
    'scan: for s in sigma {
        for zz in z {
            let lhs = model.multiply(s, zz)?;
            if let Some(matches) = rhs.get(&lhs) {
                for &(zi, si) in matches {
                    let z_prime = &z[zi];
                    if *zz == e && *z_prime == e {
                        continue; // the allowed solution
                    }
                    witness = Some(SwitchViolation {
                        sigma: s.clone(),
                        z: zz.clone(),
                        z_prime: z_prime.clone(),
                        sigma_prime: sigma[si].clone(),
                    });
                    break 'scan;
                }
            }
        }
    }

    // Independent route: punctured product-set intersections.
    let punctured: Vec<GroupElement> = z.iter().filter(|g| **g != e).cloned().collect();
    let sigma_zdot = product_set(model, sigma, &punctured)?;
    let z_sigma = product_set(model, z, sigma)?;
    let sigma_z = product_set(model, sigma, z)?;
    let zdot_sigma = product_set(model, &punctured, sigma)?;
    let set_form_clean = sigma_zdot.is_disjoint(&z_sigma) && sigma_z.is_disjoint(&zdot_sigma);

    if set_form_clean != witness.is_none() {
        return Err(SwitchError::RouteMismatch);
    }
    Ok(match witness {
        None => Ok(()),
        Some(v) => Err(v),
    })
}

fn product_set(
    model: &GroupModel,
    left: &[GroupElement],
    right: &[GroupElement],
) -> Result<HashSet<GroupElement>, SwitchError> {
    let mut out = HashSet::with_capacity(left.len() * right.len());
    for a in left {
        for b in right {
            out.insert(model.multiply(a, b)?);
        }
    }
    Ok(out)
}

/// A witnessed failure of the superswitching scan:
/// `sigma * x * sigma^epsilon = y ∈ Z` with `(x, y) != (e, e)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuperViolation {
    pub x: GroupElement,
    pub epsilon: i8,
    pub y: GroupElement,
}

/// Direct scan: for each `x ∈ Z`, both products `σxσ⁻¹` and `σxσ` must land
/// outside `Z`, except for `x = e` where `σeσ⁻¹ = e` is the allowed solution
/// and `σeσ = σ²` may equal `e` (involutions qualify).
pub fn is_superswitching(
    model: &GroupModel,
    sigma: &GroupElement,
    z: &[GroupElement],
) -> Result<Result<(), SuperViolation>, SwitchError> {
    let set: HashSet<GroupElement> = z.iter().cloned().collect();
    is_superswitching_in(model, sigma, z, &set)
}

/// Same scan with the membership set supplied by the caller, so searches can
/// reuse one set across many candidates. `ordered` fixes the witness order.
pub fn is_superswitching_in(
    model: &GroupModel,
    sigma: &GroupElement,
    ordered: &[GroupElement],
    z: &HashSet<GroupElement>,
) -> Result<Result<(), SuperViolation>, SwitchError> {
    let e = model.identity();
    if *sigma == e {
        return Err(SwitchError::IdentityInSigma);
    }
    let sigma_inv = model.inverse(sigma)?;
    for x in ordered {
        let left = model.multiply(sigma, x)?;
        for (epsilon, tail) in [(-1i8, &sigma_inv), (1i8, sigma)] {
            let y = model.multiply(&left, tail)?;
            if z.contains(&y) && !(*x == e && y == e) {
                return Ok(Err(SuperViolation {
                    x: x.clone(),
                    epsilon,
                    y,
                }));
            }
        }
    }
    Ok(Ok(()))
}

/// Streams the full scan log for a verified superswitcher: one line per
/// `(x, ε)` pair with the product and its membership verdict.
pub fn write_scan_certificate<W: Write>(
    model: &GroupModel,
    sigma: &GroupElement,
    z: &[GroupElement],
    out: &mut W,
) -> Result<(), std::io::Error> {
    let sigma_inv = model.inverse(sigma).expect("sigma belongs to the model");
    let z_set: HashSet<&GroupElement> = z.iter().collect();
    writeln!(out, "# scan certificate for sigma = {sigma}")?;
    writeln!(out, "# columns: x | epsilon | sigma x sigma^eps | in Z")?;
    for x in z {
        let left = model.multiply(sigma, x).expect("model-checked elements");
        for (eps, tail) in [(-1i8, &sigma_inv), (1i8, sigma)] {
            let y = model.multiply(&left, tail).expect("model-checked elements");
            writeln!(out, "{x} | {eps:+} | {y} | {}", z_set.contains(&y))?;
        }
    }
    Ok(())
}

/// Breadth-first enumeration of canonical elements in word-length order for
/// a fixed (possibly permuted) symmetric generator list; deterministic.
pub struct CandidateStream<'a> {
    model: &'a GroupModel,
    generators: Vec<GroupElement>,
    queue: VecDeque<GroupElement>,
    seen: HashSet<GroupElement>,
}

impl<'a> CandidateStream<'a> {
    pub fn new(model: &'a GroupModel, generators: Vec<GroupElement>) -> Self {
        let e = model.identity();
        CandidateStream {
            model,
            generators,
            queue: VecDeque::from([e.clone()]),
            seen: HashSet::from([e]),
        }
    }

    pub fn frontier_size(&self) -> usize {
        self.queue.len()
    }
}

impl Iterator for CandidateStream<'_> {
    type Item = GroupElement;

    fn next(&mut self) -> Option<GroupElement> {
        let head = self.queue.pop_front()?;
        for g in &self.generators {
            let child = self
                .model
                .multiply(&head, g)
                .expect("generators belong to the model");
            if self.seen.insert(child.clone()) {
                self.queue.push_back(child);
            }
        }
        Some(head)
    }
}

#[derive(Debug, Clone)]
pub struct SuperswitchResult {
    pub element: GroupElement,
    /// Candidates examined before the hit, including skipped ones.
    pub candidates_examined: usize,
    /// Scan size of the accepting check (|Z| pairs, two products each).
    pub scan_pairs: usize,
}

/// Searches for the first element, in breadth-first word-length order with
/// deterministic tie-breaking, that is superswitching for `z`, has its
/// symmetrized pair `{σ, σ⁻¹}` disjoint from `z`, and avoids `excluded`.
/// Existence is guaranteed on ICC groups, so exhausting the budget is a
/// capacity error, not a certificate of absence.
pub fn find_superswitcher(
    model: &GroupModel,
    z: &[GroupElement],
    generator_order: Vec<GroupElement>,
    excluded: &HashSet<GroupElement>,
    budget: usize,
) -> Result<SuperswitchResult, SwitchError> {
    let e = model.identity();
    let z_set: HashSet<GroupElement> = z.iter().cloned().collect();
    let mut stream = CandidateStream::new(model, generator_order);
    let mut examined = 0usize;
    while let Some(candidate) = stream.next() {
        examined += 1;
        if examined > budget {
            return Err(SwitchError::BudgetExhausted {
                budget,
                frontier: stream.frontier_size(),
            });
        }
        if candidate == e || excluded.contains(&candidate) {
            continue;
        }
        let inverse = model.inverse(&candidate)?;
        if excluded.contains(&inverse) || z_set.contains(&candidate) || z_set.contains(&inverse) {
            continue;
        }
        if is_superswitching_in(model, &candidate, z, &z_set)?.is_ok() {
            return Ok(SuperswitchResult {
                element: candidate,
                candidates_examined: examined,
                scan_pairs: z.len(),
            });
        }
    }
    Err(SwitchError::BudgetExhausted {
        budget,
        frontier: 0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{ball, GeneratingSet, DEFAULT_BALL_BUDGET};

    fn f2() -> GroupModel {
        GroupModel::free(2).unwrap()
    }

    fn parse_all(model: &GroupModel, words: &[&str]) -> Vec<GroupElement> {
        words.iter().map(|w| model.parse(w).unwrap()).collect()
    }

    #[test]
    fn singleton_z_is_switching_for_anything_without_e() {
        let m = f2();
        let sigma = parse_all(&m, &["a", "b^-1 a"]);
        let z = parse_all(&m, &["e"]);
        assert!(is_switching_set(&m, &sigma, &z).unwrap().is_ok());
    }

    #[test]
    fn positive_words_example() {
        // Positive words starting with `a` switch for positive words
        // starting with `b` (both up to length 3), plus the identity in Z.
        let m = f2();
        let mut sigma = Vec::new();
        let mut z = Vec::new();
        let mut tails = vec![String::new()];
        for l2 in ["a", "b"] {
            tails.push(format!(" {l2}"));
            for l3 in ["a", "b"] {
                tails.push(format!(" {l2} {l3}"));
            }
        }
        for tail in &tails {
            sigma.push(m.parse(&format!("a{tail}")).unwrap());
            z.push(m.parse(&format!("b{tail}")).unwrap());
        }
        assert!(is_switching_set(&m, &sigma, &z).unwrap().is_ok());
    }

    #[test]
    fn commuting_powers_violate() {
        let m = f2();
        let sigma = parse_all(&m, &["a^2"]);
        let z = parse_all(&m, &["e", "a"]);
        let violation = is_switching_set(&m, &sigma, &z).unwrap().unwrap_err();
        // a^2 * a = a * a^2
        assert_eq!(violation.z, m.parse("a").unwrap());
        assert_eq!(violation.z_prime, m.parse("a").unwrap());
    }

    #[test]
    fn identity_in_sigma_rejected() {
        let m = f2();
        let sigma = vec![m.identity()];
        let z = parse_all(&m, &["e"]);
        assert!(matches!(
            is_switching_set(&m, &sigma, &z),
            Err(SwitchError::IdentityInSigma)
        ));
    }

    #[test]
    fn superswitching_examples() {
        let m = f2();
        let z = parse_all(&m, &["e", "a", "a^-1"]);
        // b conjugates nothing back into powers of a
        let b = m.parse("b").unwrap();
        assert!(is_superswitching(&m, &b, &z).unwrap().is_ok());
        // a fails: a * a * a^-1 = a stays in Z
        let a = m.parse("a").unwrap();
        let violation = is_superswitching(&m, &a, &z).unwrap().unwrap_err();
        assert_eq!(violation.y, a);
        assert_eq!(violation.x, a);
        // trivial Z: any non-involution works
        let just_e = vec![m.identity()];
        assert!(is_superswitching(&m, &b, &just_e).unwrap().is_ok());
    }

    #[test]
    fn involution_clause() {
        // In Z_2 * Z_3 the generator x is an involution: x e x = e is the
        // allowed solution, so x is superswitching for {e}.
        let m = GroupModel::free_product(vec![2, 3]).unwrap();
        let x = m.parse("x").unwrap();
        let just_e = vec![m.identity()];
        assert!(is_superswitching(&m, &x, &just_e).unwrap().is_ok());
    }

    #[test]
    fn found_superswitchers_pass_independent_checks() {
        for model in [f2(), GroupModel::lamplighter(2).unwrap()] {
            let gens = GeneratingSet::standard(&model);
            let z = ball(&model, &gens, 1, DEFAULT_BALL_BUDGET).unwrap();
            let result = find_superswitcher(
                &model,
                z.elements(),
                gens.elements.clone(),
                &HashSet::new(),
                200_000,
            )
            .unwrap();
            let sigma = result.element.clone();
            let sigma_inv = model.inverse(&sigma).unwrap();

            // the defining scan, recomputed brute force over Z x {±1}
            let z_set: HashSet<GroupElement> = z.elements().iter().cloned().collect();
            for x in z.elements() {
                for tail in [&sigma_inv, &sigma] {
                    let y = model
                        .multiply(&model.multiply(&sigma, x).unwrap(), tail)
                        .unwrap();
                    if z_set.contains(&y) {
                        assert!(model.is_identity(x) && model.is_identity(&y));
                    }
                }
            }

            // the pair {σ, σ⁻¹} is a switching set in the two-route checker
            let pair = if sigma == sigma_inv {
                vec![sigma.clone()]
            } else {
                vec![sigma.clone(), sigma_inv.clone()]
            };
            assert!(is_switching_set(&model, &pair, z.elements())
                .unwrap()
                .is_ok());

            // and σ alone is a one-point switching set (conjugation half)
            assert!(is_switching_set(&model, &[sigma.clone()], z.elements())
                .unwrap()
                .is_ok());

            // monotonicity: still superswitching for any subset of Z
            let half: Vec<GroupElement> =
                z.elements().iter().step_by(2).cloned().collect();
            assert!(is_superswitching(&model, &sigma, &half).unwrap().is_ok());
        }
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let m = f2();
        let gens = GeneratingSet::standard(&m);
        let z = ball(&m, &gens, 2, DEFAULT_BALL_BUDGET).unwrap();
        match find_superswitcher(&m, z.elements(), gens.elements.clone(), &HashSet::new(), 3) {
            Err(SwitchError::BudgetExhausted { budget: 3, .. }) => {}
            other => panic!("expected budget error, got {other:?}"),
        }
    }

    #[test]
    fn scan_certificate_is_deterministic() {
        let m = f2();
        let z = parse_all(&m, &["e", "a", "a^-1"]);
        let b = m.parse("b").unwrap();
        let mut one = Vec::new();
        let mut two = Vec::new();
        write_scan_certificate(&m, &b, &z, &mut one).unwrap();
        write_scan_certificate(&m, &b, &z, &mut two).unwrap();
        assert_eq!(one, two);
        assert!(String::from_utf8(one).unwrap().contains("| false"));
    }
}
