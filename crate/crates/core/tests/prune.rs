mod common;

use tammes::graphs::{gamma13_fixtures, write_planar_code, FilterRules, PlanarEmbeddedGraph, PLANAR_CODE_HEADER};
use tammes::prune::{
    prune_graph, read_resume, run_pipeline, PipelineOptions, PipelineReport, PruneConfig, PruneStatus, Stage,
};

fn shallow() -> PruneConfig {
    PruneConfig { max_depth: 6, ..PruneConfig::default() }
}

fn stream(graphs: &[&PlanarEmbeddedGraph]) -> Vec<u8> {
    let mut bytes = Vec::new();
    write_planar_code(&mut bytes, graphs.iter().copied()).unwrap();
    bytes
}

fn mixed_input() -> Vec<u8> {
    let f = gamma13_fixtures();
    let bip = common::bipyramid(8);
    let small = common::triangulations(7);
    let mut gs: Vec<&PlanarEmbeddedGraph> = vec![&f[0].graph, &bip];
    gs.extend(small.iter());
    stream(&gs)
}

fn run(bytes: &[u8], opts: &PipelineOptions) -> PipelineReport {
    run_pipeline(bytes, &FilterRules::TAMMES13, &shallow(), opts, |_| {}).unwrap()
}

#[test]
fn empty_stream_gives_an_empty_report() {
    for bytes in [Vec::new(), PLANAR_CODE_HEADER.to_vec()] {
        let r = run(&bytes, &PipelineOptions::default());
        assert!(r.records.is_empty());
        assert_eq!((r.summary.parsed, r.summary.survived, r.summary.filtered_out), (0, 0, 0));
    }
}

#[test]
fn optimal_graph_survives_and_is_classified() {
    let out = prune_graph("g", &gamma13_fixtures()[0].graph, &shallow());
    assert_eq!(out.status, PruneStatus::Survived);
    assert!(out.residual_boxes().count() > 0);
    let r = run(&mixed_input(), &PipelineOptions::default());
    assert_eq!(r.records[0].stage, Stage::Survived);
    assert_eq!(r.records[0].class.as_deref(), Some(gamma13_fixtures()[0].name.as_str()));
    assert_eq!(r.records[1].stage, Stage::Filtered);
    assert!(r.records[1].violations.iter().any(|v| v == "degree"));
    let (lo, hi) = r.records[0].d_range.unwrap();
    assert!(lo <= 0.99723 && hi >= 0.99722, "[{lo}, {hi}]");
    assert_eq!(r.summary.parsed, r.records.len());
    assert_eq!(r.summary.survivors.len(), r.summary.survived);
}

#[test]
fn reports_do_not_depend_on_threads_or_batches() {
    let bytes = mixed_input();
    let a = run(&bytes, &PipelineOptions { jobs: 1, batch: 1, ..Default::default() });
    let b = run(&bytes, &PipelineOptions { jobs: 2, batch: 64, ..Default::default() });
    let (mut ja, mut jb) = (Vec::new(), Vec::new());
    a.without_timings().write_jsonl(&mut ja).unwrap();
    b.without_timings().write_jsonl(&mut jb).unwrap();
    assert_eq!(ja, jb);
}

#[test]
fn resume_reuses_completed_records() {
    let bytes = mixed_input();
    let full = run(&bytes, &PipelineOptions::default());
    let mut jsonl = Vec::new();
    full.write_jsonl(&mut jsonl).unwrap();
    let text = String::from_utf8(jsonl).unwrap();
    // keep two records and half of the third, as after an interrupted run
    let lines: Vec<&str> = text.lines().collect();
    let partial = format!("{}\n{}\n{}", lines[0], lines[1], &lines[2][..lines[2].len() / 2]);
    let mut resume = read_resume(partial.as_bytes()).unwrap();
    assert_eq!(resume.keys().copied().collect::<Vec<_>>(), vec![1, 2]);
    // a marked record proves the stored line is reused rather than recomputed
    resume.get_mut(&1).unwrap().nodes = 123_456;
    let mut seen = Vec::new();
    let again = run_pipeline(bytes.as_slice(), &FilterRules::TAMMES13, &shallow(), &PipelineOptions { resume, ..Default::default() }, |r| {
        seen.push(r.index)
    })
    .unwrap();
    assert_eq!(again.records[0].nodes, 123_456);
    assert_eq!(&again.records[1..], &full.records[1..]);
    assert_eq!(seen, (1..=full.records.len()).collect::<Vec<_>>());
}

#[test]
fn csv_has_one_row_per_graph() {
    let r = run(&mixed_input(), &PipelineOptions::default());
    let mut csv = Vec::new();
    r.write_csv(&mut csv).unwrap();
    let text = String::from_utf8(csv).unwrap();
    assert_eq!(text.lines().count(), r.records.len() + 1);
    assert!(text.lines().nth(2).unwrap().contains("filtered"));
}

#[test]
fn truncated_stream_is_an_error() {
    let mut bytes = stream(&[&gamma13_fixtures()[0].graph]);
    bytes.truncate(bytes.len() - 3);
    assert!(run_pipeline(bytes.as_slice(), &FilterRules::TAMMES13, &shallow(), &PipelineOptions::default(), |_| {}).is_err());
}
