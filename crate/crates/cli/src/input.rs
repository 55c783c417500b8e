use std::io::Read;
use std::path::Path;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use proper_chordal::graph::{generate, parse_edge_list};
use proper_chordal::oracle::SearchBudget;
use proper_chordal::{Graph, GraphKind, TreeLayout, Vertex};

pub const ENV_MAX_VERTICES: &str = "PCHORDAL_MAX_VERTICES";
pub const ENV_MAX_ENUMERATIONS: &str = "PCHORDAL_MAX_ENUMERATIONS";
pub const ENV_TIME_LIMIT: &str = "PCHORDAL_TIME_LIMIT_SECS";

pub fn read_text(source: &str) -> Result<String> {
    if source == "-" {
        let mut text = String::new();
        std::io::stdin().read_to_string(&mut text).context("reading stdin")?;
        return Ok(text);
    }
    std::fs::read_to_string(source).with_context(|| format!("reading `{source}`"))
}

/// An edge-list file, `-` for stdin, or a generator such as `fig9_g` or `k_sun:3` when no
/// file of that name exists.
pub fn load_graph(source: &str) -> Result<Graph> {
    if source != "-" && !Path::new(source).exists() {
        if let Ok(kind) = source.parse::<GraphKind>() {
            return generate(kind).with_context(|| format!("generating `{source}`"));
        }
    }
    let text = read_text(source)?;
    parse_edge_list(&text).with_context(|| format!("parsing `{source}`"))
}

pub fn load_layout(source: &str, g: &Graph) -> Result<TreeLayout> {
    let t = TreeLayout::from_json(&read_text(source)?).with_context(|| format!("parsing layout `{source}`"))?;
    if t.n() != g.n() {
        bail!("layout has {} vertices, graph has {}", t.n(), g.n());
    }
    Ok(t)
}

/// A vertex name takes precedence over a numeric id.
pub fn resolve_vertex(g: &Graph, spec: &str) -> Result<Vertex> {
    if let Some(v) = g.vertex_by_name(spec) {
        return Ok(v);
    }
    match spec.parse::<Vertex>() {
        Ok(v) if v < g.n() => Ok(v),
        _ => bail!("no vertex `{spec}` in a graph on {} vertices", g.n()),
    }
}

pub fn budget_from_env() -> Result<SearchBudget> {
    fn var<T: std::str::FromStr>(name: &str) -> Result<Option<T>> {
        match std::env::var(name) {
            Ok(s) => s.trim().parse().map(Some).map_err(|_| anyhow::anyhow!("{name}=`{s}` is not a number")),
            Err(_) => Ok(None),
        }
    }
    let d = SearchBudget::default();
    let max_vertices = var(ENV_MAX_VERTICES)?.unwrap_or(d.max_vertices);
    let max_enumerations = var(ENV_MAX_ENUMERATIONS)?.unwrap_or(d.max_enumerations);
    let time_limit = match var::<f64>(ENV_TIME_LIMIT)? {
        Some(secs) => Some(Duration::try_from_secs_f64(secs).with_context(|| format!("{ENV_TIME_LIMIT}={secs}"))?),
        None => d.time_limit,
    };
    Ok(SearchBudget::new(max_vertices, max_enumerations, time_limit)?)
}
