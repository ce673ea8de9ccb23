//! Scoring a graph and the CSV forms of the results.

use std::path::Path;

use abcdo_core::centrality::{self, Iteration};
use abcdo_core::clustering::{ecg, EcgConfig};
use abcdo_core::rng::{self, stage};
use abcdo_core::scores::{AucCell, DegreeBin, DegreeBins, NodeScores, ScoreKind, ScoreReport};
use abcdo_core::{Graph, Partition};
use rayon::prelude::*;

use crate::error::{CliError, Result};

pub const SCORES_HEADER: &str = "# abcdo scores v1";
pub const AUC_HEADER: &str = "# abcdo auc v1";

/// Partition the scores are computed against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PartitionSource {
    /// Final ECG partition.
    Detected,
    /// Community labels from the input; label 0 (outliers) forms one part.
    GroundTruth,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnalyzeOptions {
    pub ecg: EcgConfig,
    pub seed: u64,
    pub partition: PartitionSource,
    pub bins: DegreeBins,
    pub centrality: bool,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        Self {
            ecg: EcgConfig::default(),
            seed: 1,
            partition: PartitionSource::Detected,
            bins: DegreeBins::default(),
            centrality: false,
        }
    }
}

pub const CENTRALITY_COLUMNS: [&str; 5] = [
    "closeness",
    "eigencentrality",
    "pagerank",
    "betweenness",
    "betweenness_norm",
];

/// Optional centrality columns, one vector per entry of
/// [`CENTRALITY_COLUMNS`].
#[derive(Debug, Clone, PartialEq)]
pub struct Centralities {
    pub columns: [Vec<Option<f64>>; 5],
}

#[derive(Debug, Clone, PartialEq)]
pub struct Analysis {
    pub report: ScoreReport,
    pub centrality: Option<Centralities>,
}

/// Summary of the partition used for scoring.
#[derive(Debug, Clone, PartialEq)]
pub struct PartitionSummary {
    pub parts: usize,
    pub modularity: Option<f64>,
    pub edge_contribution: Option<f64>,
}

/// Scores every node. `truth` holds community labels with 0 for outliers;
/// without it no node counts as an outlier.
pub fn analyze(
    graph: &Graph,
    truth: Option<&[u32]>,
    options: &AnalyzeOptions,
) -> Result<(Analysis, PartitionSummary)> {
    let n = graph.node_count();
    if let Some(t) = truth {
        if t.len() != n {
            return Err(CliError::invalid(format!(
                "community labels cover {} nodes, graph has {n}",
                t.len()
            )));
        }
    }
    let flags: Vec<bool> = match truth {
        Some(t) => t.iter().map(|&l| l == 0).collect(),
        None => vec![false; n],
    };
    let result = ecg(
        graph,
        &options.ecg,
        &mut rng::stream(options.seed, stage::ANALYSIS),
    )?;
    let partition = match (options.partition, truth) {
        (PartitionSource::GroundTruth, Some(t)) => Partition::from_raw(t),
        (PartitionSource::GroundTruth, None) => {
            return Err(CliError::invalid(
                "ground-truth scoring needs a community file",
            ))
        }
        (PartitionSource::Detected, _) => result.partition,
    };
    let report = ScoreReport::compute(
        graph,
        &partition,
        &result.node_coefficients,
        &flags,
        &options.bins,
    )?;
    let parts = abcdo_core::clustering::modularity_parts(graph, &partition).ok();
    let summary = PartitionSummary {
        parts: partition.count(),
        modularity: parts.as_ref().map(|p| p.modularity()),
        edge_contribution: parts.as_ref().map(|p| p.edge_contribution),
    };
    let centrality = options.centrality.then(|| centralities(graph));
    Ok((Analysis { report, centrality }, summary))
}

const SOURCE_CHUNK: usize = 64;

/// All centralities; the per-source passes run in parallel and are summed
/// in chunk order, so the result does not depend on scheduling.
pub fn centralities(graph: &Graph) -> Centralities {
    let n = graph.node_count();
    let closeness: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|v| centrality::closeness_of(graph, v))
        .collect();
    let chunks: Vec<Vec<f64>> = (0..n.div_ceil(SOURCE_CHUNK))
        .into_par_iter()
        .map(|c| {
            centrality::betweenness_partial(
                graph,
                c * SOURCE_CHUNK..((c + 1) * SOURCE_CHUNK).min(n),
            )
        })
        .collect();
    let mut between = vec![0.0; n];
    for chunk in chunks {
        for (b, x) in between.iter_mut().zip(chunk) {
            *b += x;
        }
    }
    centrality::halve(&mut between);
    let normalized = centrality::normalize_betweenness(&between);
    let eigen = centrality::eigencentrality(graph, Iteration::default()).ok();
    let pagerank = centrality::pagerank(graph, 0.85, Iteration::default()).ok();
    let some = |v: Vec<f64>| v.into_iter().map(Some).collect::<Vec<_>>();
    let maybe = |v: Option<Vec<f64>>| v.map_or_else(|| vec![None; n], some);
    Centralities {
        columns: [
            some(closeness),
            maybe(eigen),
            maybe(pagerank),
            some(between),
            some(normalized),
        ],
    }
}

/// Node ids ordered from most to least outlying under `kind`; nodes
/// without a score come last.
pub fn ranked(report: &ScoreReport, kind: ScoreKind) -> Vec<(usize, Option<f64>)> {
    let mut rows: Vec<(usize, Option<f64>)> = report
        .nodes
        .iter()
        .enumerate()
        .map(|(v, s)| (v, s.get(kind)))
        .collect();
    let sign = if kind.higher_is_outlier() { -1.0 } else { 1.0 };
    rows.sort_by(|a, b| match (a.1, b.1) {
        (Some(x), Some(y)) => (sign * x).total_cmp(&(sign * y)).then(a.0.cmp(&b.0)),
        (Some(_), None) => std::cmp::Ordering::Less,
        (None, Some(_)) => std::cmp::Ordering::Greater,
        (None, None) => a.0.cmp(&b.0),
    });
    rows
}

pub fn format_ranked(rows: &[(usize, Option<f64>)], kind: ScoreKind) -> String {
    let mut out = format!("rank\tnode\t{}\n", kind.name());
    for (i, (v, s)) in rows.iter().enumerate() {
        out.push_str(&format!("{}\t{}\t{}\n", i + 1, v + 1, fmt_opt(*s)));
    }
    out
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map_or_else(String::new, |x| x.to_string())
}

fn csv_bytes(
    header: &str,
    rows: impl FnOnce(&mut csv::Writer<&mut Vec<u8>>) -> csv::Result<()>,
) -> Vec<u8> {
    let mut out = Vec::new();
    out.extend_from_slice(header.as_bytes());
    out.push(b'\n');
    {
        let mut w = csv::Writer::from_writer(&mut out);
        rows(&mut w).expect("in-memory csv write");
        w.flush().expect("in-memory csv flush");
    }
    out
}

/// `node,degree,bin,is_outlier,participation,ecg_coef,assoc_strength,entropy`
/// plus centrality columns when present. Undefined scores are empty.
pub fn scores_csv(analysis: &Analysis) -> Vec<u8> {
    csv_bytes(SCORES_HEADER, |w| {
        let mut header = vec!["node", "degree", "bin", "is_outlier"];
        header.extend(ScoreKind::ALL.iter().map(|k| k.name()));
        if analysis.centrality.is_some() {
            header.extend(CENTRALITY_COLUMNS);
        }
        w.write_record(&header)?;
        for (v, s) in analysis.report.nodes.iter().enumerate() {
            let mut row = vec![
                (v + 1).to_string(),
                s.degree.to_string(),
                s.bin.name().to_string(),
                u8::from(s.is_outlier).to_string(),
            ];
            row.extend(ScoreKind::ALL.iter().map(|&k| fmt_opt(s.get(k))));
            if let Some(c) = &analysis.centrality {
                row.extend(c.columns.iter().map(|col| fmt_opt(col[v])));
            }
            w.write_record(&row)?;
        }
        Ok(())
    })
}

fn check_version(path: &Path, text: &str, header: &str) -> Result<()> {
    match text.lines().next() {
        Some(first) if first.trim() == header => Ok(()),
        _ => Err(CliError::parse(path, 1, format!("expected `{header}`"))),
    }
}

fn csv_reader(text: &str) -> csv::Reader<&[u8]> {
    csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes())
}

fn csv_error(path: &Path, e: csv::Error) -> CliError {
    let line = e.position().map_or(0, |p| p.line() as usize);
    CliError::parse(path, line, e.to_string())
}

/// Reads a file written by [`scores_csv`].
pub fn parse_scores_csv(path: &Path, text: &str) -> Result<Analysis> {
    check_version(path, text, SCORES_HEADER)?;
    let mut reader = csv_reader(text);
    let header = reader.headers().map_err(|e| csv_error(path, e))?.clone();
    let with_centrality = match header.len() {
        8 => false,
        13 => true,
        k => {
            return Err(CliError::parse(
                path,
                2,
                format!("expected 8 or 13 columns, found {k}"),
            ))
        }
    };
    let mut nodes = Vec::new();
    let mut columns: [Vec<Option<f64>>; 5] = Default::default();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| csv_error(path, e))?;
        let line = record.position().map_or(i + 3, |p| p.line() as usize);
        let err = |m: String| CliError::parse(path, line, m);
        let num = |j: usize| -> Result<Option<f64>> {
            match &record[j] {
                "" => Ok(None),
                s => s
                    .parse()
                    .map(Some)
                    .map_err(|_| err(format!("invalid number `{s}`"))),
            }
        };
        if record[0].parse::<usize>().ok() != Some(i + 1) {
            return Err(err(format!("expected node {}", i + 1)));
        }
        nodes.push(NodeScores {
            degree: record[1]
                .parse()
                .map_err(|_| err("invalid degree".into()))?,
            bin: DegreeBin::from_name(&record[2]).ok_or_else(|| err("invalid bin".into()))?,
            is_outlier: match &record[3] {
                "0" => false,
                "1" => true,
                _ => return Err(err("is_outlier must be 0 or 1".into())),
            },
            participation: num(4)?,
            ecg_coef: num(5)?,
            assoc_strength: num(6)?,
            entropy: num(7)?,
        });
        if with_centrality {
            for (c, col) in columns.iter_mut().enumerate() {
                col.push(num(8 + c)?);
            }
        }
    }
    Ok(Analysis {
        report: ScoreReport { nodes },
        centrality: with_centrality.then_some(Centralities { columns }),
    })
}

/// Leading columns identifying one sweep cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellKey {
    pub xi: f64,
    pub replicate: usize,
    pub seed: u64,
}

const AUC_COLUMNS: [&str; 9] = [
    "score",
    "bin",
    "auc",
    "outlier_count",
    "outlier_mean",
    "outlier_stdev",
    "regular_count",
    "regular_mean",
    "regular_stdev",
];

fn auc_fields(cell: &AucCell) -> Vec<String> {
    let stat = |x: f64| {
        if x.is_nan() {
            String::new()
        } else {
            x.to_string()
        }
    };
    vec![
        cell.score.name().to_string(),
        cell.bin.map_or("all", DegreeBin::name).to_string(),
        fmt_opt(cell.auc),
        cell.outliers.count.to_string(),
        stat(cell.outliers.mean),
        stat(cell.outliers.stdev),
        cell.regular.count.to_string(),
        stat(cell.regular.mean),
        stat(cell.regular.stdev),
    ]
}

/// AUC and per-class mean/stdev for every score and degree bin. An empty
/// `auc` field marks a bin where one class has no members.
pub fn auc_csv(cells: &[AucCell]) -> Vec<u8> {
    csv_bytes(AUC_HEADER, |w| {
        w.write_record(AUC_COLUMNS)?;
        for cell in cells {
            w.write_record(auc_fields(cell))?;
        }
        Ok(())
    })
}

/// Long format: one row per (xi, replicate, score, bin).
pub fn sweep_csv(rows: &[(CellKey, AucCell)]) -> Vec<u8> {
    csv_bytes(crate::sweep::SWEEP_HEADER, |w| {
        let mut header = vec!["xi", "replicate", "seed"];
        header.extend(AUC_COLUMNS);
        w.write_record(&header)?;
        for (key, cell) in rows {
            let mut row = vec![
                key.xi.to_string(),
                key.replicate.to_string(),
                key.seed.to_string(),
            ];
            row.extend(auc_fields(cell));
            w.write_record(&row)?;
        }
        Ok(())
    })
}

/// One line per degenerate cell, for reporting next to the AUC table.
pub fn degenerate_notes(cells: &[AucCell]) -> Vec<String> {
    cells
        .iter()
        .filter(|c| c.auc.is_none())
        .map(|c| {
            format!(
                "AUC undefined for {} on {} nodes: {} outliers, {} regular",
                c.score.name(),
                c.bin.map_or("all", DegreeBin::name),
                c.outliers.count,
                c.regular.count
            )
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bridged() -> Graph {
        Graph::from_edges(
            7,
            [
                (0, 1),
                (1, 2),
                (0, 2),
                (3, 4),
                (4, 5),
                (3, 5),
                (6, 0),
                (6, 3),
            ],
        )
        .unwrap()
    }

    #[test]
    fn scores_csv_round_trips() {
        let g = bridged();
        let truth = [1, 1, 1, 2, 2, 2, 0];
        let options = AnalyzeOptions {
            centrality: true,
            ..AnalyzeOptions::default()
        };
        let (a, _) = analyze(&g, Some(&truth), &options).unwrap();
        let bytes = scores_csv(&a);
        let text = String::from_utf8(bytes).unwrap();
        assert!(text.starts_with("# abcdo scores v1\nnode,degree,bin,is_outlier,participation,ecg_coef,assoc_strength,entropy,closeness"));
        let back = parse_scores_csv(Path::new("s.csv"), &text).unwrap();
        assert_eq!(back, a);
    }

    #[test]
    fn isolated_nodes_have_empty_fields() {
        let g = Graph::from_edges(3, [(0, 1)]).unwrap();
        let (a, _) = analyze(&g, None, &AnalyzeOptions::default()).unwrap();
        let text = String::from_utf8(scores_csv(&a)).unwrap();
        assert!(text.lines().last().unwrap().ends_with("0,,,,"));
        assert_eq!(parse_scores_csv(Path::new("s"), &text).unwrap(), a);
    }

    #[test]
    fn no_outliers_gives_degenerate_cells() {
        let (a, _) = analyze(&bridged(), None, &AnalyzeOptions::default()).unwrap();
        let table = a.report.auc_table();
        assert!(table.iter().all(|c| c.auc.is_none()));
        assert_eq!(degenerate_notes(&table).len(), table.len());
        let csv = String::from_utf8(auc_csv(&table)).unwrap();
        assert_eq!(csv.lines().count(), 2 + table.len());
    }

    #[test]
    fn bridge_node_ranks_first() {
        let truth = [1, 1, 1, 2, 2, 2, 0];
        let options = AnalyzeOptions {
            partition: PartitionSource::GroundTruth,
            ..AnalyzeOptions::default()
        };
        let (a, summary) = analyze(&bridged(), Some(&truth), &options).unwrap();
        assert_eq!(summary.parts, 3);
        assert_eq!(ranked(&a.report, ScoreKind::Participation)[0].0, 6);
        assert_eq!(a.report.cell(ScoreKind::Participation, None).auc, Some(1.0));
        let text = format_ranked(
            &ranked(&a.report, ScoreKind::Participation)[..1],
            ScoreKind::Participation,
        );
        assert_eq!(text, "rank\tnode\tparticipation\n1\t7\t0.5\n");
    }

    #[test]
    fn malformed_scores_report_line() {
        let text = "# abcdo scores v1\nnode,degree,bin,is_outlier,participation,ecg_coef,assoc_strength,entropy\n1,2,low,0,0.5,x,,\n";
        let err = parse_scores_csv(Path::new("s.csv"), text).unwrap_err();
        assert_eq!(err.to_string(), "s.csv:3: invalid number `x`");
        assert!(parse_scores_csv(Path::new("s.csv"), "node\n").is_err());
    }

    #[test]
    fn centralities_are_deterministic() {
        let g = bridged();
        let a = centralities(&g);
        assert_eq!(a, centralities(&g));
        assert_eq!(a.columns[3][6], Some(9.0));
    }
}
