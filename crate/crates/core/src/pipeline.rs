//! End-to-end solver: per-piece nest reduction, composed decomposition, DP.

use crate::coloring::{
    brute_force_color_with, dp_list_color_stats, verify_coloring, Color, ColoringError, DpStats, ListAssignment,
    DEFAULT_ORACLE_CAP, MAX_COLOR,
};
use crate::decomposition::{CliqueSumDecomposition, DecompositionError};
use crate::graph::{Graph, Vertex};
use crate::nest::{nest_reduce, paper_depth};
use crate::treewidth::{
    apex_augment, cliquesum_compose, decompose, validate_td, vortex_compose, ComposeError, TdViolation,
    TreeDecomposition,
};
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeMap;
use std::time::Instant;
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum KPolicy {
    /// `paper_depth(|V(G)|)`
    Paper,
    Fixed(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveConfig {
    pub k: KPolicy,
    /// Required for `KPolicy::Fixed`.
    pub unsafe_k_ack: bool,
    /// Lower list-size bound for fixed k; `KPolicy::Paper` requires `t + 4`.
    pub min_list: usize,
    pub max_list: usize,
    pub cross_check: bool,
    pub oracle_cap: usize,
    pub seed: u64,
    /// 0 uses the rayon default.
    pub threads: usize,
}

impl Default for SolveConfig {
    fn default() -> Self {
        SolveConfig {
            k: KPolicy::Paper,
            unsafe_k_ack: false,
            min_list: 1,
            max_list: MAX_COLOR as usize,
            cross_check: false,
            oracle_cap: DEFAULT_ORACLE_CAP,
            seed: 0,
            threads: 0,
        }
    }
}

impl SolveConfig {
    pub fn fixed(k: usize) -> Self {
        SolveConfig { k: KPolicy::Fixed(k), unsafe_k_ack: true, ..Default::default() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Answer {
    Sat,
    Unsat,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PieceReport {
    pub embedded_vertices: usize,
    pub degenerate: bool,
    pub x_size: usize,
    pub removed: Vec<Vertex>,
    /// width of the reduced embedded part with vortex boundaries traced
    pub reduced_width: usize,
    pub max_vortex_depth: usize,
    pub vortex_width: usize,
    pub apices: usize,
    pub width: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleCheck {
    pub answer: Answer,
    pub agrees: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Timings {
    pub reduce_ms: f64,
    pub decompose_ms: f64,
    pub dp_ms: f64,
    pub oracle_ms: f64,
    pub total_ms: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SolveReport {
    pub answer: Answer,
    pub k: usize,
    pub policy: KPolicy,
    pub seed: u64,
    pub vertices: usize,
    pub reduced_vertices: usize,
    pub pieces: Vec<PieceReport>,
    pub composed_width: usize,
    pub dp: DpStats,
    /// Coloring of the reduced graph on sat.
    pub witness: Option<BTreeMap<Vertex, Color>>,
    pub oracle: Option<OracleCheck>,
    pub timings: Timings,
}

impl SolveReport {
    pub fn without_timings(&self) -> SolveReport {
        SolveReport { timings: Timings::default(), ..self.clone() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PipelineError {
    #[error("invalid decomposition: {0}")]
    Decomposition(#[from] DecompositionError),
    #[error("vertex {v} has {size} colors, outside [{min}, {max}]")]
    ListSize { v: Vertex, size: usize, min: usize, max: usize },
    #[error("a fixed nest depth needs the explicit acknowledgment flag")]
    UnacknowledgedK,
    #[error("k must be at least 1")]
    ZeroK,
    #[error("{0}")]
    Coloring(#[from] ColoringError),
    #[error("composition failed: {0}")]
    Compose(#[from] ComposeError),
    #[error("composed decomposition is invalid: {0}")]
    Td(#[from] TdViolation),
    #[error("thread pool: {0}")]
    Threads(String),
    #[error("internal invariant: {0}")]
    Invariant(String),
}

struct PieceOut {
    report: PieceReport,
    td: TreeDecomposition,
}

pub fn solve_pipeline(
    dec: &CliqueSumDecomposition,
    l: &ListAssignment,
    cfg: &SolveConfig,
) -> Result<SolveReport, PipelineError> {
    let t0 = Instant::now();
    dec.validate()?;
    let g = dec.graph();
    let n = g.num_vertices();
    let k = match cfg.k {
        KPolicy::Paper => paper_depth(n),
        KPolicy::Fixed(_) if !cfg.unsafe_k_ack => return Err(PipelineError::UnacknowledgedK),
        KPolicy::Fixed(0) => return Err(PipelineError::ZeroK),
        KPolicy::Fixed(k) => k,
    };
    // free apices per piece are at most t - 1 and lists have at least t + 4 colors
    let min = match cfg.k {
        KPolicy::Paper => (dec.max_free_apices() + 5).max(cfg.min_list),
        KPolicy::Fixed(_) => cfg.min_list.max(1),
    };
    for v in g.vertices() {
        let size = l.get(v).len();
        if size < min || size > cfg.max_list {
            return Err(PipelineError::ListSize { v, size, min, max: cfg.max_list });
        }
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads)
        .build()
        .map_err(|e| PipelineError::Threads(e.to_string()))?;
    let t_reduce = Instant::now();
    let reduced: Vec<_> = pool.install(|| {
        dec.pieces
            .par_iter()
            .enumerate()
            .map(|(i, p)| {
                let mut x = p.boundary();
                x.extend(dec.shared_with(i).into_iter().filter(|&v| p.embedded.graph().contains(v)));
                x.sort_unstable();
                x.dedup();
                if p.is_degenerate() {
                    (x.len(), p.embedded.clone(), Vec::new())
                } else {
                    let r = nest_reduce(&p.embedded, &x, k);
                    (x.len(), r.graph, r.removed)
                }
            })
            .collect()
    });
    let reduce_ms = ms(t_reduce);

    let t_dec = Instant::now();
    let outs: Vec<Result<PieceOut, PipelineError>> = pool.install(|| {
        dec.pieces
            .par_iter()
            .zip(&reduced)
            .map(|(p, (x_size, emb, removed))| {
                let mut g0 = emb.graph().clone();
                for vx in &p.vortices {
                    for w in vx.path.boundary.windows(2) {
                        g0.add_edge(w[0], w[1]);
                    }
                }
                let td0 = decompose(&g0);
                let reduced_width = validate_td(&g0, &td0)?;
                let paths: Vec<_> = p.vortices.iter().map(|vx| vx.path.clone()).collect();
                let tdv = vortex_compose(&g0, &td0, &paths)?;
                let apices = p.apex_vertices();
                let td = apex_augment(&tdv, &apices);
                let report = PieceReport {
                    embedded_vertices: p.embedded.num_vertices(),
                    degenerate: p.is_degenerate(),
                    x_size: *x_size,
                    removed: removed.clone(),
                    reduced_width,
                    max_vortex_depth: paths.iter().map(|v| v.actual_depth()).max().unwrap_or(1),
                    vortex_width: tdv.width(),
                    apices: apices.len(),
                    width: td.width(),
                };
                Ok(PieceOut { report, td })
            })
            .collect()
    });
    let outs: Vec<PieceOut> = outs.into_iter().collect::<Result<_, _>>()?;

    let mut gr: Graph = g.clone();
    for o in &outs {
        for &v in &o.report.removed {
            gr.remove_vertex(v);
        }
    }
    let tds: Vec<TreeDecomposition> = outs.iter().map(|o| o.td.clone()).collect();
    let sums: Vec<(usize, usize, Vec<Vertex>)> = dec.sums.iter().map(|s| (s.a, s.b, s.shared.clone())).collect();
    let td = cliquesum_compose(&tds, &sums)?;
    let composed_width = validate_td(&gr, &td)?;
    let decompose_ms = ms(t_dec);

    let t_dp = Instant::now();
    let lr = l.restricted_to(&gr);
    let (col, dp) = dp_list_color_stats(&gr, &lr, &td)?;
    if let Some(c) = &col {
        verify_coloring(&gr, &lr, c).map_err(|e| PipelineError::Invariant(format!("witness: {e}")))?;
    }
    let dp_ms = ms(t_dp);
    let mut answer = if col.is_some() { Answer::Sat } else { Answer::Unsat };

    let t_or = Instant::now();
    let oracle = if cfg.cross_check {
        let o = brute_force_color_with(&g, &l.restricted_to(&g), cfg.oracle_cap)?;
        if let Some(c) = &o {
            verify_coloring(&g, l, c).map_err(|e| PipelineError::Invariant(format!("oracle witness: {e}")))?;
        }
        let oa = if o.is_some() { Answer::Sat } else { Answer::Unsat };
        let agrees = oa == answer;
        answer = oa;
        Some(OracleCheck { answer: oa, agrees })
    } else {
        None
    };
    let oracle_ms = ms(t_or);

    Ok(SolveReport {
        answer,
        k,
        policy: cfg.k,
        seed: cfg.seed,
        vertices: n,
        reduced_vertices: gr.num_vertices(),
        pieces: outs.into_iter().map(|o| o.report).collect(),
        composed_width,
        dp,
        witness: col.map(|c| c.0),
        oracle,
        timings: Timings { reduce_ms, decompose_ms, dp_ms, oracle_ms, total_ms: ms(t0) },
    })
}

fn ms(t: Instant) -> f64 {
    t.elapsed().as_secs_f64() * 1e3
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::{brute_force_color_with, ColorSet};
    use crate::decomposition::two_piece_example;
    use crate::plane::generate_grid;

    #[test]
    fn grid_default_policy() {
        let dec = CliqueSumDecomposition::single(generate_grid(6, 6));
        let g = dec.graph();
        let l = ListAssignment::uniform(&g, ColorSet::range(5));
        let r = solve_pipeline(&dec, &l, &SolveConfig::default()).unwrap();
        assert_eq!(r.answer, Answer::Sat);
        assert!(r.pieces[0].removed.is_empty());
        assert_eq!(r.k, paper_depth(36));
        let w = r.witness.unwrap();
        assert_eq!(w.len(), 36);
    }

    #[test]
    fn grid_fixed_k() {
        let dec = CliqueSumDecomposition::single(generate_grid(9, 9));
        let g = dec.graph();
        let l = ListAssignment::uniform(&g, ColorSet::range(5));
        assert_eq!(
            solve_pipeline(&dec, &l, &SolveConfig { k: KPolicy::Fixed(1), ..Default::default() }),
            Err(PipelineError::UnacknowledgedK)
        );
        let cfg = SolveConfig { cross_check: true, oracle_cap: 81, ..SolveConfig::fixed(1) };
        let r = solve_pipeline(&dec, &l, &cfg).unwrap();
        assert_eq!(r.answer, Answer::Sat);
        assert!(!r.pieces[0].removed.is_empty());
        assert_eq!(r.oracle, Some(OracleCheck { answer: Answer::Sat, agrees: true }));
    }

    #[test]
    fn two_pieces() {
        let dec = two_piece_example();
        let g = dec.graph();
        for colors in [3, 4, 5] {
            let l = ListAssignment::uniform(&g, ColorSet::range(colors));
            let cfg = SolveConfig { min_list: 1, ..SolveConfig::fixed(1) };
            let r = solve_pipeline(&dec, &l, &cfg).unwrap();
            let want = brute_force_color_with(&g, &l, 15).unwrap().is_some();
            assert_eq!(r.answer == Answer::Sat, want, "{colors} colors");
            let p0 = &r.pieces[0];
            assert!(p0.vortex_width <= p0.max_vortex_depth * (p0.reduced_width + 1) - 1);
            assert_eq!(p0.width, p0.vortex_width + p0.apices);
            assert_eq!(r.composed_width, r.pieces.iter().map(|p| p.width).max().unwrap());
        }
        let l = ListAssignment::uniform(&g, ColorSet::range(5));
        let r = solve_pipeline(&dec, &l, &SolveConfig::default()).unwrap();
        assert_eq!(r.answer, Answer::Sat);
        let l4 = ListAssignment::uniform(&g, ColorSet::range(4));
        assert!(matches!(
            solve_pipeline(&dec, &l4, &SolveConfig::default()),
            Err(PipelineError::ListSize { min: 5, .. })
        ));
    }

    #[test]
    fn thread_count_does_not_change_report() {
        let dec = two_piece_example();
        let l = ListAssignment::uniform(&dec.graph(), ColorSet::range(5));
        let one = solve_pipeline(&dec, &l, &SolveConfig { threads: 1, ..SolveConfig::fixed(1) }).unwrap();
        let four = solve_pipeline(&dec, &l, &SolveConfig { threads: 4, ..SolveConfig::fixed(1) }).unwrap();
        assert_eq!(one.without_timings(), four.without_timings());
    }
}
