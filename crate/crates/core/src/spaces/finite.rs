//! Finite topological instances: carriers, indexed bases, a domain and a
//! function table.

use std::collections::{BTreeSet, HashMap};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum InstanceError {
    #[error("instance JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unknown point label {label:?} in {place}")]
    UnknownLabel { label: String, place: String },
    #[error("duplicate point label {0:?}")]
    DuplicateLabel(String),
    #[error("function is not total on the domain: no value at {0:?}")]
    NotTotal(String),
    #[error("function has two values at {0:?}")]
    NotAFunction(String),
    #[error("function defined at {0:?} outside the domain")]
    OutsideDomain(String),
}

/// The on-disk form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceFile {
    pub x_points: Vec<String>,
    pub y_points: Vec<String>,
    pub u_bases: Vec<Vec<String>>,
    pub v_bases: Vec<Vec<String>>,
    pub domain: Vec<String>,
    pub function: Vec<(String, String)>,
}

/// A validated instance; points are referred to by their position in
/// `x_points` / `y_points`, bases by their position in the base tables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteInstance {
    file: InstanceFile,
    u: Vec<BTreeSet<usize>>,
    v: Vec<BTreeSet<usize>>,
    domain: BTreeSet<usize>,
    f: HashMap<usize, usize>,
}

fn label_map(labels: &[String]) -> Result<HashMap<&str, usize>, InstanceError> {
    let mut map = HashMap::new();
    for (i, l) in labels.iter().enumerate() {
        if map.insert(l.as_str(), i).is_some() {
            return Err(InstanceError::DuplicateLabel(l.clone()));
        }
    }
    Ok(map)
}

fn lookup(map: &HashMap<&str, usize>, label: &str, place: &str) -> Result<usize, InstanceError> {
    map.get(label)
        .copied()
        .ok_or_else(|| InstanceError::UnknownLabel { label: label.to_string(), place: place.to_string() })
}

impl FiniteInstance {
    pub fn new(file: InstanceFile) -> Result<Self, InstanceError> {
        let xs = label_map(&file.x_points)?;
        let ys = label_map(&file.y_points)?;
        let table = |bases: &[Vec<String>], map: &HashMap<&str, usize>, name: &str| {
            bases
                .iter()
                .enumerate()
                .map(|(i, b)| {
                    b.iter().map(|l| lookup(map, l, &format!("{name}[{i}]"))).collect::<Result<BTreeSet<_>, _>>()
                })
                .collect::<Result<Vec<_>, _>>()
        };
        let u = table(&file.u_bases, &xs, "u_bases")?;
        let v = table(&file.v_bases, &ys, "v_bases")?;
        let domain = file.domain.iter().map(|l| lookup(&xs, l, "domain")).collect::<Result<BTreeSet<_>, _>>()?;
        let mut f = HashMap::new();
        for (a, b) in &file.function {
            let x = lookup(&xs, a, "function")?;
            let y = lookup(&ys, b, "function")?;
            if !domain.contains(&x) {
                return Err(InstanceError::OutsideDomain(a.clone()));
            }
            if let Some(prev) = f.insert(x, y) {
                if prev != y {
                    return Err(InstanceError::NotAFunction(a.clone()));
                }
            }
        }
        if let Some(&x) = domain.iter().find(|x| !f.contains_key(x)) {
            return Err(InstanceError::NotTotal(file.x_points[x].clone()));
        }
        Ok(FiniteInstance { file, u, v, domain, f })
    }

    pub fn from_json(text: &str) -> Result<Self, InstanceError> {
        FiniteInstance::new(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.file).expect("instance serializes")
    }

    pub fn file(&self) -> &InstanceFile {
        &self.file
    }

    pub fn num_x(&self) -> usize {
        self.file.x_points.len()
    }

    pub fn num_y(&self) -> usize {
        self.file.y_points.len()
    }

    /// Size of the index set `I`.
    pub fn num_u(&self) -> usize {
        self.u.len()
    }

    /// Size of the index set `J`.
    pub fn num_v(&self) -> usize {
        self.v.len()
    }

    pub fn x_label(&self, x: usize) -> &str {
        &self.file.x_points[x]
    }

    pub fn u(&self, i: usize) -> &BTreeSet<usize> {
        &self.u[i]
    }

    pub fn v(&self, j: usize) -> &BTreeSet<usize> {
        &self.v[j]
    }

    pub fn domain(&self) -> &BTreeSet<usize> {
        &self.domain
    }

    pub fn f(&self, x: usize) -> Option<usize> {
        self.f.get(&x).copied()
    }

    /// `[x]_U`.
    pub fn x_name(&self, x: usize) -> Vec<usize> {
        (0..self.num_u()).filter(|&i| self.u[i].contains(&x)).collect()
    }

    /// `[y]_V`.
    pub fn y_name(&self, y: usize) -> Vec<usize> {
        (0..self.num_v()).filter(|&j| self.v[j].contains(&y)).collect()
    }

    /// `f⁻¹(V_j)`, a subset of the domain.
    pub fn preimage(&self, j: usize) -> BTreeSet<usize> {
        self.domain.iter().copied().filter(|x| self.v[j].contains(&self.f[x])).collect()
    }

    /// `U_i ∩ E`.
    pub fn restricted(&self, i: usize) -> BTreeSet<usize> {
        self.u[i].intersection(&self.domain).copied().collect()
    }

    /// Every `f⁻¹(V_j)` is a union of sets `U_i ∩ E`.
    pub fn is_continuous(&self) -> bool {
        (0..self.num_v()).all(|j| {
            let pre = self.preimage(j);
            let covered: BTreeSet<usize> =
                (0..self.num_u()).map(|i| self.restricted(i)).filter(|r| r.is_subset(&pre)).flatten().collect();
            covered == pre
        })
    }

    /// A random continuous instance with at most 4 points per carrier and at
    /// most 6 bases per side. Both bases contain the whole carrier and are
    /// closed under binary intersection.
    pub fn random(seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        loop {
            let nx = rng.gen_range(1..=4);
            let ny = rng.gen_range(1..=4);
            let (Some(u), Some(v)) = (random_base(&mut rng, nx), random_base(&mut rng, ny)) else {
                continue;
            };
            let mut domain: Vec<usize> = (0..nx).filter(|_| rng.gen_bool(0.75)).collect();
            if domain.is_empty() {
                domain.push(rng.gen_range(0..nx));
            }
            let f: Vec<(usize, usize)> = domain.iter().map(|&x| (x, rng.gen_range(0..ny))).collect();
            let labels = |n: usize, p: &str| (0..n).map(|i| format!("{p}{i}")).collect::<Vec<_>>();
            let xl = labels(nx, "x");
            let yl = labels(ny, "y");
            let as_labels = |b: &[BTreeSet<usize>], l: &[String]| {
                b.iter().map(|s| s.iter().map(|&i| l[i].clone()).collect()).collect()
            };
            let file = InstanceFile {
                u_bases: as_labels(&u, &xl),
                v_bases: as_labels(&v, &yl),
                domain: domain.iter().map(|&x| xl[x].clone()).collect(),
                function: f.iter().map(|&(x, y)| (xl[x].clone(), yl[y].clone())).collect(),
                x_points: xl,
                y_points: yl,
            };
            let inst = FiniteInstance::new(file).expect("generated instance is valid");
            if inst.is_continuous() {
                return inst;
            }
        }
    }
}

fn random_base(rng: &mut ChaCha8Rng, n: usize) -> Option<Vec<BTreeSet<usize>>> {
    let full: BTreeSet<usize> = (0..n).collect();
    let mut sets = vec![full];
    for _ in 0..rng.gen_range(0..=3) {
        let s: BTreeSet<usize> = (0..n).filter(|_| rng.gen_bool(0.5)).collect();
        if !sets.contains(&s) {
            sets.push(s);
        }
    }
    // close under intersection
    loop {
        let mut added = false;
        for a in 0..sets.len() {
            for b in a + 1..sets.len() {
                let c: BTreeSet<usize> = sets[a].intersection(&sets[b]).copied().collect();
                if !sets.contains(&c) {
                    sets.push(c);
                    added = true;
                }
            }
        }
        if sets.len() > 6 {
            return None;
        }
        if !added {
            break;
        }
    }
    sets.shuffle(rng);
    Some(sets)
}
