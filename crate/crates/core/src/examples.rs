//! Builtin seeds, loops and reference points, keyed by name.

use crate::seed::{ExchangeSeed, MutationPath, PathStep};
use crate::sign::SignSeq;
use crate::surface::{self, Triangulation};
use crate::trop::TropXPoint;
use crate::{Error, Rat, Result};
use num_traits::One;

#[derive(Debug, Clone)]
pub struct NamedPath {
    pub name: String,
    pub path: MutationPath,
}

#[derive(Debug, Clone)]
pub struct Example {
    pub name: String,
    pub description: String,
    pub seed: ExchangeSeed,
    /// Paths in presentation order; the first one is the default loop.
    pub paths: Vec<NamedPath>,
    /// Distinguished rational points of the X-space, by name.
    pub points: Vec<(String, TropXPoint)>,
    /// Stable sign the default loop is expected to reach, when known.
    pub expected_stable_sign: Option<SignSeq>,
    pub triangulation: Option<Triangulation>,
}

impl Example {
    pub fn default_path(&self) -> Option<&MutationPath> {
        self.paths.first().map(|p| &p.path)
    }

    pub fn path_named(&self, name: &str) -> Option<&MutationPath> {
        self.paths.iter().find(|p| p.name == name).map(|p| &p.path)
    }
}

fn mutate(k1: usize) -> PathStep {
    PathStep::Mutate(k1 - 1)
}

fn swap(i1: usize, j1: usize) -> PathStep {
    PathStep::Swap(i1 - 1, j1 - 1)
}

pub fn a2() -> Example {
    let seed = ExchangeSeed::from_i64(2, vec![vec![0, 1], vec![-1, 0]]);
    let pentagon = MutationPath::new(
        seed.clone(),
        vec![mutate(1), mutate(2), mutate(1), mutate(2), mutate(1), swap(1, 2)],
    )
    .unwrap();
    Example {
        name: "a2".into(),
        description: "rank-2 seed of type A2; the five-mutation loop acts trivially".into(),
        seed,
        paths: vec![NamedPath { name: "pentagon".into(), path: pentagon }],
        points: Vec::new(),
        expected_stable_sign: None,
        triangulation: None,
    }
}

pub fn kronecker(l: i64) -> Example {
    let seed = ExchangeSeed::from_i64(2, vec![vec![0, -l], vec![l, 0]]);
    let path = MutationPath::new(seed.clone(), vec![mutate(1), swap(1, 2)]).unwrap();
    Example {
        name: format!("kronecker({l})"),
        description: format!("rank-2 seed with an {l}-fold arrow; mutate-and-swap loop"),
        seed,
        paths: vec![NamedPath { name: "twist".into(), path }],
        points: Vec::new(),
        expected_stable_sign: Some(SignSeq::parse("(+)").unwrap()),
        triangulation: None,
    }
}

pub fn annulus_dehn() -> Example {
    let tri = surface::annulus_dehn();
    let seed = tri.b_matrix().unwrap();
    let path = MutationPath::new(seed.clone(), vec![mutate(1), swap(1, 2)]).unwrap();
    Example {
        name: "annulus_dehn".into(),
        description: "Dehn twist along the core of an annulus with one marked point per boundary"
            .into(),
        seed,
        paths: vec![NamedPath { name: "twist".into(), path }],
        points: Vec::new(),
        expected_stable_sign: Some(SignSeq::parse("(+)").unwrap()),
        triangulation: Some(tri),
    }
}

pub fn sphere4_pa() -> Example {
    let tri = surface::sphere4();
    let seed = tri.b_matrix().unwrap();
    // four flips then the relabeling (1 5 6)(2 4 3) as transpositions
    let path = MutationPath::new(
        seed.clone(),
        vec![
            mutate(1),
            mutate(5),
            mutate(3),
            mutate(2),
            swap(1, 5),
            swap(1, 6),
            swap(2, 4),
            swap(2, 3),
        ],
    )
    .unwrap();
    Example {
        name: "sphere4_pa".into(),
        description: "composition of opposite half-twists on the four-punctured sphere".into(),
        seed,
        paths: vec![NamedPath { name: "pa".into(), path }],
        points: Vec::new(),
        expected_stable_sign: Some(SignSeq::parse("(+,-,-,+)").unwrap()),
        triangulation: Some(tri),
    }
}

/// Coordinates of the core curve of the twist region in the genus-2
/// example: weight 1 on each of the two arcs it crosses, with the signs
/// that make the second and third steps of the long path vanish on it.
pub fn genus2_curve_point() -> TropXPoint {
    let mut pt = vec![Rat::from_integer(0.into()); 9];
    pt[1] = Rat::one();
    pt[5] = -Rat::one();
    pt
}

pub fn genus2_dehn() -> Example {
    let tri = surface::genus2();
    let seed = tri.b_matrix().unwrap();
    let short = MutationPath::new(seed.clone(), vec![mutate(6), swap(2, 6)]).unwrap();
    let long = MutationPath::new(
        seed.clone(),
        vec![mutate(6), mutate(9), mutate(9), swap(2, 6)],
    )
    .unwrap();
    Example {
        name: "genus2_dehn".into(),
        description:
            "Dehn twist on a once-punctured genus-2 surface; the longer route through arc 9 \
             loses strictness at the core curve"
                .into(),
        seed,
        paths: vec![
            NamedPath { name: "twist".into(), path: short },
            NamedPath { name: "twist_via_9".into(), path: long },
        ],
        points: vec![("curve".into(), genus2_curve_point())],
        expected_stable_sign: Some(SignSeq::parse("(+)").unwrap()),
        triangulation: Some(tri),
    }
}

pub fn builtin_names() -> Vec<&'static str> {
    vec!["a2", "kronecker(2)", "kronecker(3)", "annulus_dehn", "sphere4_pa", "genus2_dehn"]
}

/// Look up a builtin example; `kronecker(N)` takes any N >= 2.
pub fn builtin(name: &str) -> Result<Example> {
    match name {
        "a2" => Ok(a2()),
        "annulus_dehn" => Ok(annulus_dehn()),
        "sphere4_pa" => Ok(sphere4_pa()),
        "genus2_dehn" => Ok(genus2_dehn()),
        other => {
            if let Some(arg) = other.strip_prefix("kronecker(").and_then(|s| s.strip_suffix(')')) {
                let l: i64 = arg
                    .parse()
                    .map_err(|_| Error::UnknownBuiltin(other.to_string()))?;
                if l < 1 {
                    return Err(Error::UnknownBuiltin(other.to_string()));
                }
                return Ok(kronecker(l));
            }
            if other == "kronecker" {
                return Ok(kronecker(2));
            }
            Err(Error::UnknownBuiltin(other.to_string()))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_builtin_path_is_a_loop() {
        for name in builtin_names() {
            let ex = builtin(name).unwrap();
            for np in &ex.paths {
                assert!(
                    np.path.is_mutation_loop().unwrap(),
                    "{}/{} must close up",
                    ex.name,
                    np.name
                );
            }
        }
    }

    #[test]
    fn kronecker_matrix() {
        let ex = builtin("kronecker(2)").unwrap();
        assert_eq!(
            ex.seed,
            ExchangeSeed::from_i64(2, vec![vec![0, -2], vec![2, 0]])
        );
    }

    #[test]
    fn sphere4_horizontal_part() {
        let ex = builtin("sphere4_pa").unwrap();
        let muts: Vec<usize> = ex.paths[0]
            .path
            .steps
            .iter()
            .filter_map(|s| match s {
                PathStep::Mutate(k) => Some(k + 1),
                _ => None,
            })
            .collect();
        assert_eq!(muts, vec![1, 5, 3, 2]);
    }

    #[test]
    fn unknown_name_errors() {
        assert!(builtin("heptagon").is_err());
        assert!(builtin("kronecker(x)").is_err());
    }

    #[test]
    fn genus2_exposes_both_paths() {
        let ex = builtin("genus2_dehn").unwrap();
        assert_eq!(ex.paths.len(), 2);
        assert!(ex.path_named("twist_via_9").is_some());
        assert_eq!(ex.points[0].0, "curve");
    }
}
