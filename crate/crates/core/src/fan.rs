//! Complete non-singular simplicial fans and their symmetry data.

use std::collections::{BTreeMap, HashSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::classify::{classify, ClassificationReport, IrreducibleComponent, TypeLabel};
use crate::config::{SignAssignment, VectorConfiguration};
use crate::error::{one_based, Error, Result};
use crate::lattice::{determinant, DiophantineSystem, IntegerMatrix};
use crate::roots::{compute_roots, compute_signed_roots, Root, RootKind, RootSystem};

/// A simplicial fan given by primitive rays and maximal cones.
///
/// Cone indices are 0-based here; the JSON form uses 1-based indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "RawFan", try_from = "RawFan")]
pub struct Fan {
    rank: usize,
    rays: Vec<Vec<i64>>,
    max_cones: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
struct RawFan {
    rank: usize,
    rays: Vec<Vec<i64>>,
    max_cones: Vec<Vec<usize>>,
}

impl From<Fan> for RawFan {
    fn from(f: Fan) -> Self {
        RawFan {
            rank: f.rank,
            rays: f.rays,
            max_cones: f
                .max_cones
                .iter()
                .map(|c| c.iter().map(|i| i + 1).collect())
                .collect(),
        }
    }
}

impl TryFrom<RawFan> for Fan {
    type Error = Error;

    fn try_from(raw: RawFan) -> Result<Self> {
        Fan::from_one_based(raw.rank, raw.rays, raw.max_cones)
    }
}

impl Fan {
    /// Validates primitivity, unimodularity and the wall condition.
    pub fn new(rank: usize, rays: Vec<Vec<i64>>, max_cones: Vec<Vec<usize>>) -> Result<Self> {
        let m = rays.len();
        if m == 0 || rank == 0 {
            return Err(Error::InvalidInput("a fan needs rays and rank ≥ 1".into()));
        }
        for (i, r) in rays.iter().enumerate() {
            if r.len() != rank {
                return Err(Error::DimensionMismatch(format!(
                    "ray {} has length {}, rank is {}",
                    i + 1,
                    r.len(),
                    rank
                )));
            }
        }
        if max_cones.is_empty() {
            return Err(Error::InvalidInput("no maximal cones".into()));
        }
        let mut cones = Vec::with_capacity(max_cones.len());
        for cone in max_cones {
            let mut c = cone.clone();
            c.sort_unstable();
            c.dedup();
            if c.len() != rank || cone.len() != rank {
                return Err(Error::InvalidInput(format!(
                    "cone {} must have {} distinct rays",
                    one_based(&cone),
                    rank
                )));
            }
            if let Some(&bad) = c.iter().find(|&&i| i >= m) {
                return Err(Error::InvalidInput(format!(
                    "ray index {} out of range 1..={m}",
                    bad + 1
                )));
            }
            cones.push(c);
        }
        cones.sort();
        if let Some(w) = cones.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidInput(format!(
                "cone {} listed twice",
                one_based(&w[0])
            )));
        }
        let used: HashSet<usize> = cones.iter().flatten().copied().collect();
        if let Some(i) = (0..m).find(|i| !used.contains(i)) {
            return Err(Error::InvalidInput(format!(
                "ray {} lies in no maximal cone",
                i + 1
            )));
        }

        for (index, ray) in rays.iter().enumerate() {
            let g = ray.iter().fold(0i64, |g, &x| g.gcd(&x));
            if g != 1 {
                return Err(Error::NonPrimitive {
                    index,
                    ray: ray.clone(),
                });
            }
        }

        let fan = Fan {
            rank,
            rays,
            max_cones: cones,
        };
        for cone in &fan.max_cones {
            let det = fan.cone_determinant(cone)?;
            if det.abs() != BigInt::one() {
                return Err(Error::SingularCone {
                    cone: cone.clone(),
                    det: det.to_string(),
                });
            }
        }
        fan.check_walls()?;
        fan.check_single_sheet()?;
        Ok(fan)
    }

    /// Same as [`Fan::new`] with 1-based cone indices.
    pub fn from_one_based(
        rank: usize,
        rays: Vec<Vec<i64>>,
        max_cones: Vec<Vec<usize>>,
    ) -> Result<Self> {
        let cones = max_cones
            .into_iter()
            .map(|c| {
                c.into_iter()
                    .map(|i| {
                        i.checked_sub(1)
                            .ok_or_else(|| Error::InvalidInput("ray indices start at 1".into()))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Fan::new(rank, rays, cones)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn rays(&self) -> &[Vec<i64>] {
        &self.rays
    }

    pub fn ray_count(&self) -> usize {
        self.rays.len()
    }

    pub fn max_cones(&self) -> &[Vec<usize>] {
        &self.max_cones
    }

    fn cone_matrix(&self, cone: &[usize]) -> Result<IntegerMatrix> {
        let rows: Vec<&[i64]> = cone.iter().map(|&i| self.rays[i].as_slice()).collect();
        IntegerMatrix::from_rows(&rows)
    }

    fn cone_determinant(&self, cone: &[usize]) -> Result<BigInt> {
        determinant(&self.cone_matrix(cone)?)
    }

    /// Each wall (a cone minus one ray) must lie in exactly two maximal
    /// cones whose remaining rays are strictly on opposite sides of it.
    fn check_walls(&self) -> Result<()> {
        let mut walls: BTreeMap<Vec<usize>, Vec<(usize, usize)>> = BTreeMap::new();
        for (ci, cone) in self.max_cones.iter().enumerate() {
            for (pos, &opposite) in cone.iter().enumerate() {
                let mut wall = cone.clone();
                wall.remove(pos);
                walls.entry(wall).or_default().push((ci, opposite));
            }
        }
        for (wall, sides) in &walls {
            if sides.len() != 2 {
                return Err(Error::NotComplete {
                    wall: wall.clone(),
                    reason: format!("lies in {} maximal cone(s), expected 2", sides.len()),
                });
            }
            // the sign of det(wall ∪ {v}) tells which side of the wall v is on
            let side = |v: usize| -> Result<BigInt> {
                let mut rows: Vec<&[i64]> = wall.iter().map(|&i| self.rays[i].as_slice()).collect();
                rows.push(&self.rays[v]);
                determinant(&IntegerMatrix::from_rows(&rows)?)
            };
            let (a, b) = (side(sides[0].1)?, side(sides[1].1)?);
            if (a * b).is_positive() || sides[0].1 == sides[1].1 {
                return Err(Error::NotComplete {
                    wall: wall.clone(),
                    reason: format!(
                        "rays {} and {} lie on the same side",
                        sides[0].1 + 1,
                        sides[1].1 + 1
                    ),
                });
            }
        }
        Ok(())
    }

    /// The wall condition alone admits fans that wrap around several times.
    /// In a genuine fan the interior point `Σ vᵢ` of a maximal cone lies in
    /// no other maximal cone.
    fn check_single_sheet(&self) -> Result<()> {
        let systems = self.cone_systems()?;
        for (ci, cone) in self.max_cones.iter().enumerate() {
            let p: Vec<BigInt> = (0..self.rank)
                .map(|k| cone.iter().map(|&i| BigInt::from(self.rays[i][k])).sum())
                .collect();
            for (cj, s) in systems.iter().enumerate() {
                if cj == ci {
                    continue;
                }
                if let Some(c) = s.particular(&p)? {
                    if c.iter().all(|x| !x.is_negative()) {
                        return Err(Error::NotComplete {
                            wall: cone.clone(),
                            reason: format!(
                                "cone overlaps cone {}; the rays wrap around more than once",
                                one_based(&self.max_cones[cj])
                            ),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    fn cone_systems(&self) -> Result<Vec<DiophantineSystem>> {
        self.max_cones
            .iter()
            .map(|c| Ok(DiophantineSystem::new(&self.cone_matrix(c)?.transpose())))
            .collect()
    }

    /// Point location on the integer box `[−radius, radius]ⁿ`: returns a
    /// point lying in no maximal cone, if any. A sampling cross-check of
    /// completeness, independent of the wall condition.
    pub fn uncovered_point(&self, radius: i64) -> Result<Option<Vec<i64>>> {
        let systems = self.cone_systems()?;
        let n = self.rank;
        let mut p = vec![-radius; n];
        loop {
            let rhs: Vec<BigInt> = p.iter().map(|&x| BigInt::from(x)).collect();
            let mut covered = false;
            for s in &systems {
                if let Some(c) = s.particular(&rhs)? {
                    if c.iter().all(|x| !x.is_negative()) {
                        covered = true;
                        break;
                    }
                }
            }
            if !covered {
                return Ok(Some(p));
            }
            let mut k = 0;
            loop {
                if k == n {
                    return Ok(None);
                }
                if p[k] < radius {
                    p[k] += 1;
                    break;
                }
                p[k] = -radius;
                k += 1;
            }
        }
    }

    /// The rays as a vector configuration.
    pub fn configuration(&self) -> VectorConfiguration {
        VectorConfiguration::new(self.rank, self.rays.clone())
            .expect("a unimodular cone spans the lattice")
    }

    /// Whether `face` (sorted or not) lies in some maximal cone.
    pub fn is_face(&self, face: &[usize]) -> bool {
        self.max_cones
            .iter()
            .any(|c| face.iter().all(|i| c.contains(i)))
    }

    /// Star subdivision along a face: adds the ray `Σ_{i∈face} vᵢ` and
    /// splits every maximal cone containing the face. Smooth and complete
    /// fans stay smooth and complete.
    pub fn blow_up(&self, face: &[usize]) -> Result<Fan> {
        if face.len() < 2 || !self.is_face(face) {
            return Err(Error::InvalidInput(format!(
                "{} is not a face of dimension ≥ 2",
                one_based(face)
            )));
        }
        let new_ray: Vec<i64> = (0..self.rank)
            .map(|k| face.iter().map(|&i| self.rays[i][k]).sum())
            .collect();
        let new_index = self.rays.len();
        let mut rays = self.rays.clone();
        rays.push(new_ray);
        let mut cones = Vec::new();
        for cone in &self.max_cones {
            if face.iter().all(|i| cone.contains(i)) {
                for &drop in face {
                    let mut c: Vec<usize> = cone.iter().copied().filter(|&i| i != drop).collect();
                    c.push(new_index);
                    cones.push(c);
                }
            } else {
                cones.push(cone.clone());
            }
        }
        Fan::new(self.rank, rays, cones)
    }

    /// Named fans: `cp1`…`cp5`, `cp1xcp1`, `cp1xcp2`, `hirzebruch0`…`hirzebruch3`,
    /// `pentagon`.
    pub fn catalog(name: &str) -> Option<Fan> {
        let fan = match name {
            "cp1xcp1" => hirzebruch(0),
            "cp1xcp2" => product(&projective_space(1), &projective_space(2)),
            "pentagon" => Fan::new(
                2,
                vec![
                    vec![1, 0],
                    vec![0, 1],
                    vec![-1, 1],
                    vec![-1, 0],
                    vec![0, -1],
                ],
                vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![3, 4], vec![4, 0]],
            ),
            _ => {
                if let Some(n) = name
                    .strip_prefix("cp")
                    .and_then(|s| s.parse::<usize>().ok())
                {
                    if (1..=5).contains(&n) {
                        projective_space(n)
                    } else {
                        return None;
                    }
                } else {
                    let k = name
                    .strip_prefix("hirzebruch")
                    .and_then(|s| s.parse::<i64>().ok())?;
                    if (0..=3).contains(&k) {
                        hirzebruch(k)
                    } else {
                        return None;
                    }
                }
            }
        };
        Some(fan.expect("catalog fans are valid"))
    }

    pub fn catalog_names() -> Vec<&'static str> {
        vec![
            "cp1",
            "cp2",
            "cp3",
            "cp4",
            "cp5",
            "cp1xcp1",
            "cp1xcp2",
            "hirzebruch0",
            "hirzebruch1",
            "hirzebruch2",
            "hirzebruch3",
            "pentagon",
        ]
    }
}

fn projective_space(n: usize) -> Result<Fan> {
    let cfg = VectorConfiguration::projective(n);
    let cones = (0..=n)
        .map(|skip| (0..=n).filter(|&i| i != skip).collect())
        .collect();
    Fan::new(n, cfg.vectors().to_vec(), cones)
}

/// Rays `(1,0), (0,1), (−1,k), (0,−1)`.
fn hirzebruch(k: i64) -> Result<Fan> {
    Fan::new(
        2,
        vec![vec![1, 0], vec![0, 1], vec![-1, k], vec![0, -1]],
        vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![3, 0]],
    )
}

fn product(a: &Result<Fan>, b: &Result<Fan>) -> Result<Fan> {
    let (a, b) = match (a, b) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(e), _) | (_, Err(e)) => return Err(e.clone()),
    };
    let rank = a.rank + b.rank;
    let mut rays = Vec::new();
    for r in &a.rays {
        let mut v = r.clone();
        v.extend(std::iter::repeat_n(0, b.rank));
        rays.push(v);
    }
    for r in &b.rays {
        let mut v = vec![0; a.rank];
        v.extend(r);
        rays.push(v);
    }
    let shift = a.rays.len();
    let mut cones = Vec::new();
    for ca in &a.max_cones {
        for cb in &b.max_cones {
            let mut c = ca.clone();
            c.extend(cb.iter().map(|i| i + shift));
            cones.push(c);
        }
    }
    Fan::new(rank, rays, cones)
}

/// Roots of the ray configuration; with signs, the opposite-sign roots of
/// the signed configuration.
pub fn fan_roots(fan: &Fan, signs: Option<&SignAssignment>) -> Result<RootSystem> {
    let cfg = fan.configuration();
    match signs {
        None => compute_roots(&cfg),
        Some(s) => compute_signed_roots(&cfg, s),
    }
}

/// Inclusion-minimal index sets that are not faces, sorted by size and then
/// lexicographically.
pub fn minimal_nonfaces(fan: &Fan) -> Vec<Vec<usize>> {
    let m = fan.ray_count();
    let mut faces: HashSet<u64> = HashSet::new();
    for cone in &fan.max_cones {
        let n = cone.len();
        for bits in 0u64..1 << n {
            let mask = (0..n)
                .filter(|k| bits >> k & 1 == 1)
                .fold(0u64, |acc, k| acc | 1 << cone[k]);
            faces.insert(mask);
        }
    }
    let mut out = Vec::new();
    for size in 1..=(fan.rank + 1).min(m) {
        for subset in crate::roots::combinations(m, size) {
            let mask = subset.iter().fold(0u64, |acc, &i| acc | 1 << i);
            if faces.contains(&mask) {
                continue;
            }
            if subset.iter().all(|&i| faces.contains(&(mask & !(1 << i)))) {
                out.push(subset);
            }
        }
    }
    out
}

/// Whether every minimal non-face contains both or neither of the two
/// support indices of `root`. This is the condition for the linear group
/// acting on those two coordinates to preserve the exceptional set of the
/// quotient construction. `root` must be a type-2 root of the fan.
pub fn preserves_exceptional_set(fan: &Fan, root: &Root) -> Result<bool> {
    let roots = fan_roots(fan, None)?;
    if roots.get(root.alpha()) != Some(root) {
        return Err(Error::InvalidInput(format!(
            "{root} is not a root of the fan"
        )));
    }
    if root.kind() != RootKind::Type2 {
        return Err(Error::InvalidInput(format!("{root} is not a type-2 root")));
    }
    Ok(support_respects_nonfaces(
        &minimal_nonfaces(fan),
        &root.support(),
    ))
}

fn support_respects_nonfaces(nonfaces: &[Vec<usize>], support: &[usize]) -> bool {
    nonfaces.iter().all(|nf| {
        let hits = support.iter().filter(|i| nf.contains(i)).count();
        hits == 0 || hits == support.len()
    })
}

/// Partition of `[m]` into classes joined by root supports.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "RawPartition", try_from = "RawPartition")]
pub struct PartitionReport {
    /// 0-based, each class ascending, classes ordered by first element.
    pub classes: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
struct RawPartition {
    classes: Vec<Vec<usize>>,
    factor_ranks: Vec<usize>,
}

impl From<PartitionReport> for RawPartition {
    fn from(p: PartitionReport) -> Self {
        RawPartition {
            factor_ranks: p.factor_ranks(),
            classes: p
                .classes
                .iter()
                .map(|c| c.iter().map(|i| i + 1).collect())
                .collect(),
        }
    }
}

impl TryFrom<RawPartition> for PartitionReport {
    type Error = Error;

    fn try_from(raw: RawPartition) -> Result<Self> {
        let classes = raw
            .classes
            .into_iter()
            .map(|c| {
                c.into_iter()
                    .map(|i| {
                        i.checked_sub(1)
                            .ok_or_else(|| Error::InvalidInput("indices start at 1".into()))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let p = PartitionReport { classes };
        if p.factor_ranks() != raw.factor_ranks {
            return Err(Error::InvalidInput(
                "factor ranks do not match classes".into(),
            ));
        }
        Ok(p)
    }
}

impl PartitionReport {
    /// Connected components of the graph on `[m]` with an edge for every
    /// root support.
    pub fn from_roots(m: usize, roots: &RootSystem) -> Self {
        let mut parent: Vec<usize> = (0..m).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for r in roots.roots() {
            let s = r.support();
            for w in s.windows(2) {
                let (a, b) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
        let mut classes: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for i in 0..m {
            let r = find(&mut parent, i);
            classes.entry(r).or_default().push(i);
        }
        PartitionReport {
            classes: classes.into_values().collect(),
        }
    }

    /// `|μ| − 1` per class; the type-A rank each class contributes.
    pub fn factor_ranks(&self) -> Vec<usize> {
        self.classes.iter().map(|c| c.len() - 1).collect()
    }

    /// Type-A labels of the classes with at least two elements.
    pub fn factor_labels(&self) -> Vec<TypeLabel> {
        self.classes
            .iter()
            .filter(|c| c.len() >= 2)
            .map(|c| TypeLabel::a(c.len() - 1))
            .collect()
    }
}

/// Orbit partition of the rays under the reflections of the standard
/// (all-plus) roots.
pub fn reflection_partition(fan: &Fan) -> Result<PartitionReport> {
    let roots = fan_roots(fan, Some(&SignAssignment::all_plus(fan.ray_count())))?;
    Ok(PartitionReport::from_roots(fan.ray_count(), &roots))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

impl Check {
    fn new(name: &str, failures: Vec<String>) -> Self {
        Check {
            name: name.into(),
            passed: failures.is_empty(),
            detail: failures.join("; "),
        }
    }
}

/// Roots, classification, orbit partition and the structural checks tying
/// them together.
#[derive(Debug, Clone)]
pub struct SymmetryReport {
    pub signs: Option<SignAssignment>,
    pub roots: RootSystem,
    pub components: Vec<IrreducibleComponent>,
    pub partition: PartitionReport,
    pub minimal_nonfaces: Vec<Vec<usize>>,
    pub checks: Vec<Check>,
}

impl SymmetryReport {
    pub fn consistent(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

pub fn symmetry_report(fan: &Fan, signs: Option<&SignAssignment>) -> Result<SymmetryReport> {
    let m = fan.ray_count();
    let standard = SignAssignment::all_plus(m);
    let signs = signs.unwrap_or(&standard);
    if signs.len() != m {
        return Err(Error::DimensionMismatch(format!(
            "{} signs for {m} rays",
            signs.len()
        )));
    }
    let unsigned = fan_roots(fan, None)?;
    let standard_roots = fan_roots(fan, Some(&standard))?;
    let roots = fan_roots(fan, Some(signs))?;
    let components = classify(&roots)?;
    let partition = PartitionReport::from_roots(m, &roots);
    let nonfaces = minimal_nonfaces(fan);

    let mut checks = Vec::new();

    let stray: Vec<String> = unsigned
        .roots()
        .iter()
        .filter(|r| !r.has_opposite_signs())
        .map(|r| format!("{r} has pairing {:?}", r.pairing()))
        .collect();
    checks.push(Check::new("only opposite-sign roots", stray));

    let mut differ = Vec::new();
    if standard_roots.alphas() != unsigned.alphas() {
        differ.push(format!(
            "{} standard roots vs {} roots",
            standard_roots.len(),
            unsigned.len()
        ));
    }
    checks.push(Check::new("standard roots equal all roots", differ));

    let outside: Vec<String> = roots
        .roots()
        .iter()
        .filter(|r| !unsigned.contains(r.alpha()))
        .map(|r| r.to_string())
        .collect();
    checks.push(Check::new("signed roots form a subsystem", outside));

    let broken: Vec<String> = unsigned
        .roots()
        .iter()
        .filter(|r| {
            r.kind() != RootKind::Type2 || !support_respects_nonfaces(&nonfaces, &r.support())
        })
        .map(|r| r.to_string())
        .collect();
    checks.push(Check::new("exceptional set invariant", broken));

    checks.push(Check::new(
        "components match partition",
        product_identity(&components, &partition),
    ));

    Ok(SymmetryReport {
        signs: Some(signs.clone()),
        roots,
        components,
        partition,
        minimal_nonfaces: nonfaces,
        checks,
    })
}

/// Each component must be `A_{|μ|−1}` supported exactly on a class `μ`, and
/// every class of size ≥ 2 must carry one component.
fn product_identity(
    components: &[IrreducibleComponent],
    partition: &PartitionReport,
) -> Vec<String> {
    let mut failures = Vec::new();
    let mut matched = HashSet::new();
    for c in components {
        let mut support: Vec<usize> = c.roots.roots().iter().flat_map(Root::support).collect();
        support.sort_unstable();
        support.dedup();
        match partition.classes.iter().position(|cl| *cl == support) {
            Some(idx) => {
                let want = TypeLabel::a(support.len() - 1);
                if c.label != want {
                    failures.push(format!(
                        "component on {} is {}, expected {want}",
                        one_based(&support),
                        c.label
                    ));
                }
                matched.insert(idx);
            }
            None => failures.push(format!(
                "component {} has support {} which is not a class",
                c.label,
                one_based(&support)
            )),
        }
    }
    for (idx, cl) in partition.classes.iter().enumerate() {
        if cl.len() >= 2 && !matched.contains(&idx) {
            failures.push(format!("class {} carries no component", one_based(cl)));
        }
    }
    failures
}

/// Serializable form of a [`SymmetryReport`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymmetryReportJson {
    pub fan: Fan,
    pub signs: String,
    pub roots: RootSystem,
    pub classification: ClassificationReport,
    pub partition: PartitionReport,
    pub minimal_nonfaces: Vec<Vec<usize>>,
    pub checks: Vec<Check>,
    pub consistent: bool,
}

impl SymmetryReportJson {
    pub fn new(fan: &Fan, report: &SymmetryReport) -> Self {
        SymmetryReportJson {
            fan: fan.clone(),
            signs: report
                .signs
                .as_ref()
                .map(|s| s.to_string())
                .unwrap_or_default(),
            roots: report.roots.clone(),
            classification: ClassificationReport::new(&report.components),
            partition: report.partition.clone(),
            minimal_nonfaces: report
                .minimal_nonfaces
                .iter()
                .map(|s| s.iter().map(|i| i + 1).collect())
                .collect(),
            checks: report.checks.clone(),
            consistent: report.consistent(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::Family;

    fn cp2() -> Fan {
        Fan::catalog("cp2").unwrap()
    }

    #[test]
    fn cp2_fan_is_valid() {
        let f = Fan::new(
            2,
            vec![vec![1, 0], vec![0, 1], vec![-1, -1]],
            vec![vec![0, 1], vec![1, 2], vec![0, 2]],
        )
        .unwrap();
        assert_eq!(f, cp2());
    }

    #[test]
    fn missing_cone_is_incomplete() {
        let err = Fan::new(
            2,
            vec![vec![1, 0], vec![0, 1], vec![-1, -1]],
            vec![vec![0, 1], vec![1, 2]],
        )
        .unwrap_err();
        assert!(matches!(err, Error::NotComplete { .. }), "{err}");
    }

    #[test]
    fn singular_cone_detected() {
        let err = Fan::new(
            2,
            vec![vec![1, 0], vec![1, 2], vec![-1, -1]],
            vec![vec![0, 1], vec![1, 2], vec![0, 2]],
        )
        .unwrap_err();
        assert_eq!(
            err,
            Error::SingularCone {
                cone: vec![0, 1],
                det: "2".into()
            }
        );
    }

    #[test]
    fn non_primitive_ray_detected() {
        let err = Fan::new(
            2,
            vec![vec![2, 0], vec![0, 1], vec![-1, -1]],
            vec![vec![0, 1], vec![1, 2], vec![0, 2]],
        )
        .unwrap_err();
        assert!(matches!(err, Error::NonPrimitive { index: 0, .. }));
    }

    #[test]
    fn overlapping_cones_fail_wall_condition() {
        // both cones on the same side of the wall {2}
        let err = Fan::new(
            2,
            vec![vec![1, 0], vec![0, 1], vec![1, 1]],
            vec![vec![0, 1], vec![1, 2]],
        );
        assert!(matches!(
            err,
            Err(Error::NotComplete { .. }) | Err(Error::SingularCone { .. })
        ));
        let err = Fan::new(1, vec![vec![1], vec![1]], vec![vec![0], vec![1]]).unwrap_err();
        assert!(matches!(err, Error::NotComplete { .. }));
    }

    #[test]
    fn double_cover_rejected() {
        let rays = [vec![1, 0], vec![0, 1], vec![-1, 0], vec![0, -1]];
        let rays: Vec<Vec<i64>> = rays.iter().chain(rays.iter()).cloned().collect();
        let cones = (0..8).map(|i| vec![i, (i + 1) % 8]).collect();
        let err = Fan::new(2, rays, cones).unwrap_err();
        assert!(matches!(err, Error::NotComplete { .. }), "{err}");
    }

    #[test]
    fn bad_indices_rejected() {
        assert!(matches!(
            Fan::new(2, vec![vec![1, 0], vec![0, 1]], vec![vec![0, 5]]),
            Err(Error::InvalidInput(_))
        ));
        assert!(matches!(
            Fan::new(2, vec![vec![1, 0], vec![0, 1]], vec![vec![0]]),
            Err(Error::InvalidInput(_))
        ));
        assert!(matches!(
            Fan::from_one_based(1, vec![vec![1], vec![-1]], vec![vec![0], vec![1]]),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn catalog_fans_are_complete_by_sampling() {
        for name in Fan::catalog_names() {
            let f = Fan::catalog(name).unwrap();
            let radius = if f.rank() <= 3 { 3 } else { 1 };
            assert_eq!(f.uncovered_point(radius).unwrap(), None, "{name}");
        }
    }

    #[test]
    fn sampler_finds_holes() {
        // a fan-shaped hole: cones of cp2 minus one, built without validation
        let f = Fan {
            rank: 2,
            rays: vec![vec![1, 0], vec![0, 1], vec![-1, -1]],
            max_cones: vec![vec![0, 1], vec![1, 2]],
        };
        assert!(f.uncovered_point(2).unwrap().is_some());
    }

    #[test]
    fn configurations() {
        assert_eq!(
            cp2().configuration().vectors(),
            &[vec![1, 0], vec![0, 1], vec![-1, -1]]
        );
        assert_eq!(
            Fan::catalog("cp1xcp1").unwrap().configuration().vectors(),
            &[vec![1, 0], vec![0, 1], vec![-1, 0], vec![0, -1]]
        );
        assert_eq!(
            Fan::catalog("hirzebruch3")
                .unwrap()
                .configuration()
                .vectors(),
            &[vec![1, 0], vec![0, 1], vec![-1, 3], vec![0, -1]]
        );
    }

    #[test]
    fn fan_roots_examples() {
        let r = fan_roots(&cp2(), None).unwrap();
        assert_eq!(r.len(), 6);
        assert_eq!(classify(&r).unwrap()[0].label, TypeLabel::a(2));
        let std = fan_roots(&cp2(), Some(&SignAssignment::all_plus(3))).unwrap();
        assert_eq!(std.alphas(), r.alphas());

        let p = Fan::catalog("cp1xcp1").unwrap();
        let block = SignAssignment::block(1, 4).unwrap();
        let signed = fan_roots(&p, Some(&block)).unwrap();
        assert!(signed.is_subset_of(&fan_roots(&p, None).unwrap()));
    }

    #[test]
    fn nonface_examples() {
        assert_eq!(minimal_nonfaces(&cp2()), vec![vec![0, 1, 2]]);
        let expected = vec![vec![0, 2], vec![1, 3]];
        assert_eq!(
            minimal_nonfaces(&Fan::catalog("cp1xcp1").unwrap()),
            expected
        );
        assert_eq!(
            minimal_nonfaces(&Fan::catalog("hirzebruch1").unwrap()),
            expected
        );
    }

    #[test]
    fn exceptional_set_examples() {
        let f = cp2();
        let r = fan_roots(&f, None).unwrap();
        assert!(preserves_exceptional_set(&f, r.get(&[1, -1]).unwrap()).unwrap());

        let p = Fan::catalog("cp1xcp1").unwrap();
        let rp = fan_roots(&p, None).unwrap();
        assert!(preserves_exceptional_set(&p, rp.get(&[1, 0]).unwrap()).unwrap());

        // a root of another configuration is rejected
        let b2 = compute_roots(&VectorConfiguration::standard_basis(2)).unwrap();
        assert!(matches!(
            preserves_exceptional_set(&f, b2.get(&[1, 1]).unwrap()),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn partitions() {
        assert_eq!(
            reflection_partition(&cp2()).unwrap().classes,
            vec![vec![0, 1, 2]]
        );
        let p = reflection_partition(&Fan::catalog("cp1xcp1").unwrap()).unwrap();
        assert_eq!(p.classes, vec![vec![0, 2], vec![1, 3]]);
        assert_eq!(p.factor_labels(), vec![TypeLabel::a(1), TypeLabel::a(1)]);
        let pent = reflection_partition(&Fan::catalog("pentagon").unwrap()).unwrap();
        assert_eq!(pent.classes.len(), 5);
        assert!(pent.factor_labels().is_empty());
    }

    #[test]
    fn partition_json_is_one_based() {
        let p = reflection_partition(&Fan::catalog("hirzebruch2").unwrap()).unwrap();
        let json = serde_json::to_string(&p).unwrap();
        assert_eq!(
            json,
            r#"{"classes":[[1,3],[2],[4]],"factor_ranks":[1,0,0]}"#
        );
        assert_eq!(serde_json::from_str::<PartitionReport>(&json).unwrap(), p);
    }

    #[test]
    fn reports() {
        let rep = symmetry_report(&cp2(), None).unwrap();
        assert!(rep.consistent(), "{:?}", rep.checks);
        assert_eq!(rep.components.len(), 1);
        assert_eq!(rep.components[0].label, TypeLabel::a(2));

        let h2 = Fan::catalog("hirzebruch2").unwrap();
        let rep = symmetry_report(&h2, None).unwrap();
        assert!(rep.consistent());
        assert_eq!(rep.partition.classes, vec![vec![0, 2], vec![1], vec![3]]);
        assert_eq!(rep.components[0].label, TypeLabel::a(1));

        let p = Fan::catalog("cp1xcp1").unwrap();
        let omega = SignAssignment::block(2, 4).unwrap();
        let rep = symmetry_report(&p, Some(&omega)).unwrap();
        assert!(rep.consistent(), "{:?}", rep.checks);
        // v₃ = −v₁ and v₄ = −v₂ after flipping become equal to v₁, v₂
        assert!(rep.roots.is_empty());

        let omega = SignAssignment::from_values(&[1, 1, 1, -1]).unwrap();
        let rep = symmetry_report(&p, Some(&omega)).unwrap();
        assert!(rep.consistent());
        assert_eq!(rep.roots.alphas(), vec![vec![-1, 0], vec![1, 0]]);
        assert_eq!(rep.components[0].label.family, Family::A);
    }

    #[test]
    fn blow_up_keeps_smoothness() {
        let p = Fan::catalog("pentagon").unwrap();
        let b = p.blow_up(&[0, 1]).unwrap();
        assert_eq!(b.ray_count(), 6);
        assert_eq!(b.rays()[5], vec![1, 1]);
        assert!(fan_roots(&b, None).unwrap().is_empty());
        let cp3 = Fan::catalog("cp3").unwrap();
        let b = cp3.blow_up(&[0, 1]).unwrap();
        assert_eq!(b.uncovered_point(2).unwrap(), None);
        assert!(p.blow_up(&[0, 2]).is_err());
    }

    #[test]
    fn fan_json_round_trip() {
        let f = Fan::catalog("cp1xcp2").unwrap();
        let json = serde_json::to_string(&f).unwrap();
        assert!(json.contains(r#""max_cones":[[1,3,4]"#));
        assert_eq!(serde_json::from_str::<Fan>(&json).unwrap(), f);
    }
}
