use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{parse_edge_list, Graph, GraphError};

const CEVENOL: &str = include_str!("../../data/cevenol.txt");
const FIG8: &str = include_str!("../../data/fig8.txt");
const FIG9_G: &str = include_str!("../../data/fig9_g.txt");
const FIG9_GPRIME: &str = include_str!("../../data/fig9_gprime.txt");
const FIG10: &str = include_str!("../../data/fig10.txt");

/// Named graph families and fixtures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphKind {
    /// Clique `x0..x(k-1)` plus `y_i` adjacent to `x_i` and `x_(i+1 mod k)`.
    KSun(usize),
    /// Universal vertex `v` (id 0) over the path `v1..v(k+1)` (ids 1..=k+1).
    KFan(usize),
    Cevenol,
    Path(usize),
    Clique(usize),
    /// Centre 0 joined to `n - 1` leaves.
    Star(usize),
    /// Comparability graph of a random rooted tree.
    TriviallyPerfect { seed: u64, n: usize },
    /// Intersection graph of random unit intervals.
    ProperInterval { seed: u64, n: usize },
    Fig8,
    Fig9G,
    Fig9GPrime,
    Fig10,
}

impl GraphKind {
    /// Parses a generator name followed by its integer arguments.
    pub fn parse(name: &str, args: &[&str]) -> Result<GraphKind, GraphError> {
        let nums: Vec<u64> = args
            .iter()
            .map(|a| a.parse::<u64>().map_err(|_| GraphError::InvalidParameter(format!("`{a}` is not an integer"))))
            .collect::<Result<_, _>>()?;
        let arity = |k: usize| -> Result<(), GraphError> {
            if nums.len() == k {
                Ok(())
            } else {
                Err(GraphError::InvalidParameter(format!("`{name}` takes {k} argument(s), got {}", nums.len())))
            }
        };
        let kind = match name {
            "k_sun" => {
                arity(1)?;
                GraphKind::KSun(nums[0] as usize)
            }
            "k_fan" => {
                arity(1)?;
                GraphKind::KFan(nums[0] as usize)
            }
            "path" => {
                arity(1)?;
                GraphKind::Path(nums[0] as usize)
            }
            "clique" => {
                arity(1)?;
                GraphKind::Clique(nums[0] as usize)
            }
            "star" => {
                arity(1)?;
                GraphKind::Star(nums[0] as usize)
            }
            "trivially_perfect" => {
                arity(2)?;
                GraphKind::TriviallyPerfect { seed: nums[0], n: nums[1] as usize }
            }
            "proper_interval" => {
                arity(2)?;
                GraphKind::ProperInterval { seed: nums[0], n: nums[1] as usize }
            }
            "cevenol" | "fig8" | "fig9_g" | "fig9_gprime" | "fig10" => {
                arity(0)?;
                match name {
                    "cevenol" => GraphKind::Cevenol,
                    "fig8" => GraphKind::Fig8,
                    "fig9_g" => GraphKind::Fig9G,
                    "fig9_gprime" => GraphKind::Fig9GPrime,
                    _ => GraphKind::Fig10,
                }
            }
            other => return Err(GraphError::UnknownGenerator(other.to_owned())),
        };
        Ok(kind)
    }
}

/// Accepts `name`, `name:a,b` or `name a b`.
impl FromStr for GraphKind {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let (name, rest) = match s.find([':', ' ']) {
            Some(i) => (&s[..i], &s[i + 1..]),
            None => (s, ""),
        };
        let args: Vec<&str> = rest.split([',', ' ']).filter(|a| !a.is_empty()).collect();
        GraphKind::parse(name, &args)
    }
}

impl fmt::Display for GraphKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphKind::KSun(k) => write!(f, "k_sun {k}"),
            GraphKind::KFan(k) => write!(f, "k_fan {k}"),
            GraphKind::Cevenol => write!(f, "cevenol"),
            GraphKind::Path(n) => write!(f, "path {n}"),
            GraphKind::Clique(n) => write!(f, "clique {n}"),
            GraphKind::Star(n) => write!(f, "star {n}"),
            GraphKind::TriviallyPerfect { seed, n } => write!(f, "trivially_perfect {seed} {n}"),
            GraphKind::ProperInterval { seed, n } => write!(f, "proper_interval {seed} {n}"),
            GraphKind::Fig8 => write!(f, "fig8"),
            GraphKind::Fig9G => write!(f, "fig9_g"),
            GraphKind::Fig9GPrime => write!(f, "fig9_gprime"),
            GraphKind::Fig10 => write!(f, "fig10"),
        }
    }
}

pub fn generate(kind: GraphKind) -> Result<Graph, GraphError> {
    let at_least = |value: usize, min: usize, what: &str| {
        if value < min {
            Err(GraphError::InvalidParameter(format!("{what} must be at least {min}, got {value}")))
        } else {
            Ok(())
        }
    };
    let g = match kind {
        GraphKind::KSun(k) => {
            at_least(k, 3, "k")?;
            let mut edges = Vec::new();
            for i in 0..k {
                for j in i + 1..k {
                    edges.push((i, j));
                }
                edges.push((i, k + i));
                edges.push(((i + 1) % k, k + i));
            }
            let names = (0..k).map(|i| format!("x{i}")).chain((0..k).map(|i| format!("y{i}"))).collect();
            Graph::from_edges(2 * k, &edges)?.with_names(names)
        }
        GraphKind::KFan(k) => {
            at_least(k, 1, "k")?;
            let mut edges: Vec<_> = (1..=k + 1).map(|i| (0, i)).collect();
            edges.extend((1..=k).map(|i| (i, i + 1)));
            let names = std::iter::once("v".to_owned()).chain((1..=k + 1).map(|i| format!("v{i}"))).collect();
            Graph::from_edges(k + 2, &edges)?.with_names(names)
        }
        GraphKind::Path(n) => {
            at_least(n, 1, "n")?;
            let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
            Graph::from_edges(n, &edges)?
        }
        GraphKind::Clique(n) => {
            at_least(n, 1, "n")?;
            let edges: Vec<_> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
            Graph::from_edges(n, &edges)?
        }
        GraphKind::Star(n) => {
            at_least(n, 1, "n")?;
            let edges: Vec<_> = (1..n).map(|i| (0, i)).collect();
            Graph::from_edges(n, &edges)?
        }
        GraphKind::TriviallyPerfect { seed, n } => {
            at_least(n, 1, "n")?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut parent = vec![usize::MAX; n];
            let mut edges = Vec::new();
            for v in 1..n {
                parent[v] = rng.gen_range(0..v);
                let mut a = parent[v];
                loop {
                    edges.push((a, v));
                    if a == 0 {
                        break;
                    }
                    a = parent[a];
                }
            }
            Graph::from_edges(n, &edges)?
        }
        GraphKind::ProperInterval { seed, n } => {
            at_least(n, 1, "n")?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let spread = (n as f64 / 2.0).max(1.0);
            let left: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..spread)).collect();
            let mut edges = Vec::new();
            for i in 0..n {
                for j in i + 1..n {
                    if (left[i] - left[j]).abs() <= 1.0 {
                        edges.push((i, j));
                    }
                }
            }
            Graph::from_edges(n, &edges)?
        }
        GraphKind::Cevenol => parse_edge_list(CEVENOL)?,
        GraphKind::Fig8 => parse_edge_list(FIG8)?,
        GraphKind::Fig9G => parse_edge_list(FIG9_G)?,
        GraphKind::Fig9GPrime => parse_edge_list(FIG9_GPRIME)?,
        GraphKind::Fig10 => parse_edge_list(FIG10)?,
    };
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gen(s: &str) -> Graph {
        generate(s.parse().unwrap()).unwrap()
    }

    #[test]
    fn sizes_of_named_graphs() {
        let sun = gen("k_sun 3");
        assert_eq!((sun.n(), sun.edge_count()), (6, 9));
        let y0 = sun.vertex_by_name("y0").unwrap();
        let nb: Vec<String> = sun.adjacent(y0).iter().map(|&v| sun.label(v)).collect();
        assert_eq!(nb, ["x0", "x1"]);
        let fan = gen("k_fan 5");
        assert_eq!((fan.n(), fan.edge_count()), (7, 11));
        assert_eq!(gen("cevenol").edge_count(), 13);
        assert_eq!((gen("fig8").n(), gen("fig8").edge_count()), (7, 10));
        assert_eq!(gen("fig9_g").edge_count(), 17);
        assert_eq!(gen("fig9_gprime").edge_count(), 15);
        assert_eq!(gen("star 4").edge_count(), 3);
        assert_eq!(gen("clique 5").edge_count(), 10);
    }

    #[test]
    fn fig9_difference_is_two_edges() {
        let g = gen("fig9_g");
        let h = gen("fig9_gprime");
        let b = g.vertex_by_name("b").unwrap();
        for w in ["w", "w'"] {
            let w = g.vertex_by_name(w).unwrap();
            assert!(g.has_edge(w, b));
            assert!(!h.has_edge(w, b));
        }
    }

    #[test]
    fn parse_forms() {
        assert_eq!("k_sun:4".parse::<GraphKind>().unwrap(), GraphKind::KSun(4));
        assert_eq!(
            "trivially_perfect 3 9".parse::<GraphKind>().unwrap(),
            GraphKind::TriviallyPerfect { seed: 3, n: 9 }
        );
        assert!("k_sun".parse::<GraphKind>().is_err());
        assert!("nope 1".parse::<GraphKind>().is_err());
        assert!(generate(GraphKind::KSun(2)).is_err());
        assert!(generate(GraphKind::Path(0)).is_err());
    }

    #[test]
    fn random_generators_are_seeded() {
        let a = generate(GraphKind::ProperInterval { seed: 7, n: 12 }).unwrap();
        let b = generate(GraphKind::ProperInterval { seed: 7, n: 12 }).unwrap();
        assert_eq!(a, b);
        let t = generate(GraphKind::TriviallyPerfect { seed: 1, n: 10 }).unwrap();
        assert!(t.is_connected());
    }
}
