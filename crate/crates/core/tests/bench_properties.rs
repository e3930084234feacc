use wellspread::bench::{table_report_with, BenchConfig, GraphSpec, StartChoice};
use wellspread::graph;
use wellspread::{Graph, Spectrum};

fn config(name: &str, ks: Vec<usize>, start: StartChoice, trials: usize) -> BenchConfig {
    let mut cfg = BenchConfig::new(GraphSpec::Named { name: name.into(), params: vec![] });
    cfg.ks = ks;
    cfg.start = start;
    cfg.trials = trials;
    cfg
}

fn check_table(g: &Graph, cfg: &BenchConfig) {
    let s = Spectrum::decompose(g).unwrap();
    let doc = table_report_with(g, &s, cfg).unwrap();
    let diam = g.diameter() as f64;
    for block in &doc.blocks {
        for row in &block.rows {
            assert!(row.algorithm >= 0.0 && row.algorithm <= diam);
            assert!(row.random >= 0.0 && row.random <= diam);
            if row.k >= 2 {
                assert!(
                    row.algorithm <= row.random,
                    "{} start {} k={}: algorithm {} > random {}",
                    doc.graph,
                    block.start,
                    row.k,
                    row.algorithm,
                    row.random
                );
            }
        }
    }
}

#[test]
fn truncated_tetrahedral_beats_baseline() {
    let g = graph::truncated_tetrahedral();
    check_table(&g, &config("truncated_tetrahedral", (1..=10).collect(), StartChoice::Sweep, 1000));
}

#[test]
fn frucht_beats_baseline() {
    let g = graph::frucht();
    check_table(&g, &config("frucht", (1..=10).collect(), StartChoice::Sweep, 1000));
}

#[test]
fn menger_beats_baseline_from_a_corner() {
    let g = graph::menger2();
    check_table(&g, &config("menger2", vec![1, 3, 5, 10], StartChoice::Vertex(0), 300));
}
