//! Irreducible decomposition and A/B/C/D classification.
//!
//! Each component is named twice: once by matching its Dynkin diagram
//! against the classical catalog, once from the type data of its simple
//! roots (type-1 simple root ⇒ B, conjugate type-2 simple roots ⇒ D,
//! otherwise A). The two must agree.

use std::cmp::Reverse;
use std::collections::HashSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::IntegerMatrix;
use crate::roots::{cartan_integer, verify_closure, Root, RootKind, RootSystem};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    C,
    D,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TypeLabel {
    pub family: Family,
    pub rank: usize,
}

impl TypeLabel {
    pub fn new(family: Family, rank: usize) -> Self {
        TypeLabel { family, rank }
    }

    pub fn a(rank: usize) -> Self {
        TypeLabel::new(Family::A, rank)
    }

    /// Number of roots of a system of this type.
    pub fn root_count(&self) -> usize {
        let n = self.rank;
        match self.family {
            Family::A => n * (n + 1),
            Family::B | Family::C => 2 * n * n,
            Family::D => 2 * n * (n - 1),
        }
    }
}

impl fmt::Display for TypeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}{}", self.family, self.rank)
    }
}

/// One irreducible piece of a root system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IrreducibleComponent {
    pub roots: RootSystem,
    pub simple_roots: Vec<Root>,
    /// Entry `(i, j)` is `a_{sᵢ,sⱼ} = 2(sᵢ, sⱼ)/(sⱼ, sⱼ)`.
    pub cartan: Vec<Vec<i64>>,
    pub label: TypeLabel,
    /// Set when the criteria route had to fall back on a rank convention.
    pub note: Option<String>,
}

impl IrreducibleComponent {
    /// Roots strictly shorter than the longest ones; empty when all roots
    /// have the same length.
    pub fn short_roots(&self) -> Vec<&Root> {
        let max = self
            .roots
            .roots()
            .iter()
            .map(Root::squared_length)
            .max()
            .unwrap_or(0);
        self.roots
            .roots()
            .iter()
            .filter(|r| r.squared_length() < max)
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.simple_roots.len()
    }
}

/// Connected components of the non-orthogonality graph, each returned as a
/// sub-system over the same configuration, ordered by smallest root.
pub fn components(system: &RootSystem) -> Vec<RootSystem> {
    let roots = system.roots();
    let n = roots.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for i in 0..n {
        for j in i + 1..n {
            if roots[i].form(&roots[j]) != 0 {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut groups: Vec<Vec<&Root>> = Vec::new();
    let mut slot = vec![usize::MAX; n];
    for i in 0..n {
        let r = find(&mut parent, i);
        if slot[r] == usize::MAX {
            slot[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[slot[r]].push(&roots[i]);
    }
    groups.into_iter().map(|g| system.restrict(g)).collect()
}

/// The functional `w = (Bⁿ⁻¹, …, B, 1)` with `B = 1 + 2·max|αₖ|`.
///
/// Every coordinate of every root is a balanced base-`B` digit, so
/// `⟨α, w⟩ ≠ 0` for `α ≠ 0` and its sign is the sign of the first nonzero
/// coordinate.
pub fn positivity_functional(system: &RootSystem) -> Vec<BigInt> {
    let n = system.configuration().rank();
    let max = system
        .roots()
        .iter()
        .flat_map(|r| r.alpha().iter().map(|x| x.unsigned_abs()))
        .max()
        .unwrap_or(0);
    let base = BigInt::from(1 + 2 * max);
    let mut w = vec![BigInt::one(); n];
    for k in (0..n.saturating_sub(1)).rev() {
        w[k] = &w[k + 1] * &base;
    }
    w
}

fn height(root: &Root, w: &[BigInt]) -> BigInt {
    root.alpha()
        .iter()
        .zip(w)
        .map(|(&a, wk)| BigInt::from(a) * wk)
        .sum()
}

/// Positive roots that are not a sum of two positive roots, in `α` order.
pub fn simple_roots(component: &RootSystem) -> Result<Vec<Root>> {
    let w = positivity_functional(component);
    let mut positive = Vec::new();
    for r in component.roots() {
        let h = height(r, &w);
        if h.is_zero() {
            return Err(Error::InvariantViolation(format!(
                "positivity functional vanishes on {r}"
            )));
        }
        if h.is_positive() {
            positive.push(r);
        }
    }
    let set: HashSet<&[i64]> = positive.iter().map(|r| r.alpha()).collect();
    let simple = positive
        .iter()
        .filter(|g| {
            !positive.iter().any(|a| {
                let rest: Vec<i64> = g
                    .alpha()
                    .iter()
                    .zip(a.alpha())
                    .map(|(x, y)| x - y)
                    .collect();
                set.contains(rest.as_slice())
            })
        })
        .map(|r| (*r).clone())
        .collect();
    Ok(simple)
}

/// Cartan matrix of an ordered list of simple roots.
pub fn cartan_matrix(simple: &[Root]) -> Result<IntegerMatrix> {
    IntegerMatrix::from_rows(&cartan_rows(simple)?)
}

fn cartan_rows(simple: &[Root]) -> Result<Vec<Vec<i64>>> {
    simple
        .iter()
        .map(|si| simple.iter().map(|sj| cartan_integer(si, sj)).collect())
        .collect()
}

/// Cartan matrix of a catalog type, built from its standard simple roots in
/// Euclidean coordinates (same entry convention as [`cartan_matrix`]).
pub fn catalog_cartan(label: TypeLabel) -> Vec<Vec<i64>> {
    let n = label.rank;
    let e = |i: usize, scale: i64| -> Vec<i64> {
        let mut v = vec![0; n + 1];
        v[i] = scale;
        v
    };
    let diff = |i: usize, j: usize| -> Vec<i64> {
        let mut v = vec![0; n + 1];
        v[i] = 1;
        v[j] = -1;
        v
    };
    let simple: Vec<Vec<i64>> = match label.family {
        Family::A => (0..n).map(|i| diff(i, i + 1)).collect(),
        Family::B | Family::C | Family::D => {
            let mut s: Vec<Vec<i64>> = (0..n - 1).map(|i| diff(i, i + 1)).collect();
            match label.family {
                Family::B => s.push(e(n - 1, 1)),
                Family::C => s.push(e(n - 1, 2)),
                _ => {
                    let mut last = vec![0; n + 1];
                    last[n - 2] = 1;
                    last[n - 1] = 1;
                    s.push(last);
                }
            }
            s
        }
    };
    let dot = |a: &[i64], b: &[i64]| -> i64 { a.iter().zip(b).map(|(x, y)| x * y).sum() };
    simple
        .iter()
        .map(|si| {
            simple
                .iter()
                .map(|sj| 2 * dot(si, sj) / dot(sj, sj))
                .collect()
        })
        .collect()
}

/// Names a Cartan matrix by the shape of its Dynkin diagram.
///
/// Rank 1 is `A1`. A rank-2 double bond is `B2`, or `C2` when `dual` is set.
/// A double bond at the end of a longer chain is `B` when the end node is
/// short and `C` when it is long. A simply-laced chain is `A`; a single
/// branch node with two legs of length one is `D` (rank ≥ 4).
pub fn classify_by_catalog(cartan: &[Vec<i64>], dual: bool) -> Result<TypeLabel> {
    let k = cartan.len();
    let describe = || format!("Cartan matrix {cartan:?}");
    if k == 0 {
        return Err(Error::UnexpectedType("empty component".into()));
    }
    if cartan.iter().any(|row| row.len() != k) || (0..k).any(|i| cartan[i][i] != 2) {
        return Err(Error::UnexpectedType(describe()));
    }
    if k == 1 {
        return Ok(TypeLabel::a(1));
    }

    let mut degree = vec![0usize; k];
    let mut edges = Vec::new();
    for i in 0..k {
        for j in i + 1..k {
            let (a, b) = (cartan[i][j], cartan[j][i]);
            if (a == 0) != (b == 0) || a > 0 || b > 0 {
                return Err(Error::UnexpectedType(describe()));
            }
            if a != 0 {
                edges.push((i, j, a * b));
                degree[i] += 1;
                degree[j] += 1;
            }
        }
    }
    if edges.len() != k - 1 || !connected(k, &edges) {
        return Err(Error::UnexpectedType(format!(
            "{} is not a tree",
            describe()
        )));
    }
    let doubles: Vec<&(usize, usize, i64)> = edges.iter().filter(|e| e.2 == 2).collect();
    if edges.iter().any(|e| e.2 != 1 && e.2 != 2) {
        return Err(Error::UnexpectedType(format!(
            "{} has a triple bond",
            describe()
        )));
    }
    let max_degree = *degree.iter().max().unwrap();

    match (doubles.len(), max_degree) {
        (0, d) if d <= 2 => Ok(TypeLabel::a(k)),
        (0, 3) => {
            let branch = degree.iter().position(|&d| d == 3).unwrap();
            let mut legs = leg_lengths(k, &edges, branch);
            legs.sort_unstable();
            if degree.iter().filter(|&&d| d == 3).count() == 1 && legs[0] == 1 && legs[1] == 1 {
                Ok(TypeLabel::new(Family::D, k))
            } else {
                Err(Error::UnexpectedType(format!(
                    "{} is of type E",
                    describe()
                )))
            }
        }
        (1, d) if d <= 2 => {
            let &(i, j, _) = doubles[0];
            if k == 2 {
                let family = if dual { Family::C } else { Family::B };
                return Ok(TypeLabel::new(family, 2));
            }
            let (leaf, inner) = match (degree[i], degree[j]) {
                (1, _) => (i, j),
                (_, 1) => (j, i),
                _ => {
                    return Err(Error::UnexpectedType(format!(
                        "{} is of type F",
                        describe()
                    )))
                }
            };
            // a_{inner,leaf} = −2 exactly when the leaf is the short root
            let family = if cartan[inner][leaf] == -2 {
                Family::B
            } else {
                Family::C
            };
            Ok(TypeLabel::new(family, k))
        }
        _ => Err(Error::UnexpectedType(describe())),
    }
}

fn connected(k: usize, edges: &[(usize, usize, i64)]) -> bool {
    let mut seen = vec![false; k];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(x) = stack.pop() {
        for &(a, b, _) in edges {
            let y = if a == x {
                b
            } else if b == x {
                a
            } else {
                continue;
            };
            if !seen[y] {
                seen[y] = true;
                stack.push(y);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

fn leg_lengths(k: usize, edges: &[(usize, usize, i64)], center: usize) -> Vec<usize> {
    let neighbours = |x: usize| -> Vec<usize> {
        edges
            .iter()
            .filter_map(|&(a, b, _)| {
                if a == x {
                    Some(b)
                } else if b == x {
                    Some(a)
                } else {
                    None
                }
            })
            .collect()
    };
    neighbours(center)
        .into_iter()
        .map(|start| {
            let mut len = 1;
            let (mut prev, mut cur) = (center, start);
            while let Some(next) = neighbours(cur).into_iter().find(|&y| y != prev) {
                prev = cur;
                cur = next;
                len += 1;
                if len > k {
                    break;
                }
            }
            len
        })
        .collect()
}

/// Verdict of the simple-root criteria.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CriteriaVerdict {
    pub label: TypeLabel,
    pub note: Option<String>,
}

/// Names a component from the types of its simple roots: B when a simple
/// root is type 1 (C for a dual system), D when all are type 2 and two are
/// conjugate, A otherwise. Conjugate simple roots in rank < 4 give A with a
/// note, since D is only used from rank 4 on.
pub fn classify_by_criteria(simple: &[Root], dual: bool) -> CriteriaVerdict {
    let rank = simple.len();
    if rank <= 1 {
        return CriteriaVerdict {
            label: TypeLabel::a(rank),
            note: None,
        };
    }
    if simple.iter().any(|r| r.kind() == RootKind::Type1) {
        let family = if dual { Family::C } else { Family::B };
        return CriteriaVerdict {
            label: TypeLabel::new(family, rank),
            note: None,
        };
    }
    let has_conjugate = simple
        .iter()
        .enumerate()
        .any(|(i, a)| simple[i + 1..].iter().any(|b| are_conjugate(a, b)));
    match (has_conjugate, rank >= 4) {
        (true, true) => CriteriaVerdict {
            label: TypeLabel::new(Family::D, rank),
            note: None,
        },
        (true, false) => CriteriaVerdict {
            label: TypeLabel::a(rank),
            note: Some(format!(
                "conjugate simple roots in rank {rank}: D{rank} is labelled A{rank}"
            )),
        },
        (false, _) => CriteriaVerdict {
            label: TypeLabel::a(rank),
            note: None,
        },
    }
}

/// Type-2 roots with the same two-element support that are not `±` each
/// other.
pub fn are_conjugate(a: &Root, b: &Root) -> bool {
    a.kind() == RootKind::Type2
        && b.kind() == RootKind::Type2
        && a.support() == b.support()
        && a != b
        && *a != b.negated()
}

/// All conjugate pairs `(a, b)` with `a < b`.
pub fn conjugate_pairs(system: &RootSystem) -> Vec<(Root, Root)> {
    let roots = system.roots();
    let mut out = Vec::new();
    for (i, a) in roots.iter().enumerate() {
        for b in &roots[i + 1..] {
            if are_conjugate(a, b) {
                out.push((a.clone(), b.clone()));
            }
        }
    }
    out
}

/// Simple roots, Cartan matrix and catalog label of one irreducible piece,
/// cross-checked against the criteria route.
pub fn analyze_component(component: &RootSystem) -> Result<IrreducibleComponent> {
    let simple = simple_roots(component)?;
    let cartan = cartan_rows(&simple)?;
    let label = classify_by_catalog(&cartan, component.is_dual())?;
    let verdict = classify_by_criteria(&simple, component.is_dual());
    if verdict.label != label {
        return Err(Error::InvariantViolation(format!(
            "catalog says {label}, criteria say {} for simple roots {}",
            verdict.label,
            simple
                .iter()
                .map(|r| r.to_string())
                .collect::<Vec<_>>()
                .join(" ")
        )));
    }
    Ok(IrreducibleComponent {
        roots: component.clone(),
        simple_roots: simple,
        cartan,
        label,
        note: verdict.note,
    })
}

/// Checks that `subset` is a closed sub-system of `system`, then decomposes
/// and classifies it.
pub fn classify_subsystem(
    system: &RootSystem,
    subset: &RootSystem,
) -> Result<Vec<IrreducibleComponent>> {
    if subset.configuration() != system.configuration() {
        return Err(Error::NotASubsystem(
            "subset is over a different configuration".into(),
        ));
    }
    if let Some(r) = subset.roots().iter().find(|r| !system.contains(r.alpha())) {
        return Err(Error::NotASubsystem(format!(
            "{r} is not in the root system"
        )));
    }
    let report = verify_closure(subset);
    if let Some(v) = report.first_violation {
        return Err(Error::NotASubsystem(v.to_string()));
    }
    components(subset).iter().map(analyze_component).collect()
}

/// Decomposes and classifies a whole system.
pub fn classify(system: &RootSystem) -> Result<Vec<IrreducibleComponent>> {
    classify_subsystem(system, system)
}

/// Long-root (type 2) part of a system.
pub fn long_roots(system: &RootSystem) -> RootSystem {
    system.restrict(
        system
            .roots()
            .iter()
            .filter(|r| r.kind() == RootKind::Type2),
    )
}

/// Labels of a classification, largest rank first.
pub fn labels(components: &[IrreducibleComponent]) -> Vec<TypeLabel> {
    let mut v: Vec<TypeLabel> = components.iter().map(|c| c.label).collect();
    v.sort_by_key(|l| (Reverse(l.rank), l.family));
    v
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentReport {
    pub family: Family,
    pub rank: usize,
    pub simple_roots: Vec<Vec<i64>>,
    pub cartan: Vec<Vec<i64>>,
    pub conjugate_pairs: Vec<[Vec<i64>; 2]>,
    pub short_roots: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl From<&IrreducibleComponent> for ComponentReport {
    fn from(c: &IrreducibleComponent) -> Self {
        ComponentReport {
            family: c.label.family,
            rank: c.label.rank,
            simple_roots: c.simple_roots.iter().map(|r| r.alpha().to_vec()).collect(),
            cartan: c.cartan.clone(),
            conjugate_pairs: conjugate_pairs(&c.roots)
                .into_iter()
                .map(|(a, b)| [a.alpha().to_vec(), b.alpha().to_vec()])
                .collect(),
            short_roots: c.short_roots().iter().map(|r| r.alpha().to_vec()).collect(),
            note: c.note.clone(),
        }
    }
}

/// Serializable classification of a root system.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub components: Vec<ComponentReport>,
    pub criteria_agreement: bool,
}

impl ClassificationReport {
    /// Builds the report; both routes already agree for every component
    /// that reaches this point.
    pub fn new(components: &[IrreducibleComponent]) -> Self {
        ClassificationReport {
            components: components.iter().map(ComponentReport::from).collect(),
            criteria_agreement: true,
        }
    }
}
