//! Synthetic MOOT tables shared by the integration tests.

#![allow(dead_code)]

use moot_bench::data::{load_table, Table};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Renders a table as MOOT CSV text.
pub fn to_csv(header: &[String], rows: &[Vec<String>]) -> String {
    let mut s = header.join(",");
    s.push('\n');
    for r in rows {
        s.push_str(&r.join(","));
        s.push('\n');
    }
    s
}

/// A smooth multi-goal landscape over `dims` independent columns.
///
/// Every fifth column is symbolic with three levels; the rest are numeric
/// on `[0, 100]`. Goals: a weighted quadratic bowl around a random centre
/// (minimize), a smooth ridge (maximize) and, when `goals == 3`, a linear
/// cost (minimize). All goal functions are smooth in the numeric columns.
pub fn smooth_landscape_csv(dims: usize, rows: usize, goals: usize, seed: u64) -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let symbolic = |j: usize| j % 5 == 4;
    let centre: Vec<f64> = (0..dims).map(|_| rng.random_range(0.2..0.8)).collect();
    let weights: Vec<f64> = (0..dims).map(|_| rng.random_range(0.5..2.0)).collect();
    let ridge: Vec<f64> = (0..dims).map(|_| rng.random_range(-1.0..1.0)).collect();
    let cost: Vec<f64> = (0..dims).map(|_| rng.random_range(0.0..1.0)).collect();
    let levels = ["lo", "mid", "hi"];
    let good_level = rng.random_range(0..3);

    let mut header: Vec<String> = (0..dims).map(|j| if symbolic(j) { format!("opt{j}") } else { format!("X{j}") }).collect();
    header.push("Loss-".into());
    header.push("Gain+".into());
    if goals >= 3 {
        header.push("Cost-".into());
    }
    let mut body = Vec::with_capacity(rows);
    for _ in 0..rows {
        let mut cells = Vec::with_capacity(dims + goals);
        let mut bowl = 0.0;
        let mut gain = 0.0;
        let mut spend = 0.0;
        for j in 0..dims {
            if symbolic(j) {
                let k = rng.random_range(0..3);
                cells.push(levels[k].to_string());
                let miss = if k == good_level { 0.0 } else { 0.05 };
                bowl += weights[j] * miss;
            } else {
                let u: f64 = rng.random_range(0.0..1.0);
                cells.push(format!("{:.3}", u * 100.0));
                bowl += weights[j] * (u - centre[j]).powi(2);
                gain += ridge[j] * (std::f64::consts::PI * (u - centre[j])).cos();
                spend += cost[j] * u;
            }
        }
        cells.push(format!("{bowl:.6}"));
        cells.push(format!("{:.6}", gain - 0.5 * bowl));
        if goals >= 3 {
            cells.push(format!("{:.6}", spend + bowl));
        }
        body.push(cells);
    }
    to_csv(&header, &body)
}

pub fn smooth_landscape(dims: usize, rows: usize, goals: usize, seed: u64) -> Table {
    let csv = smooth_landscape_csv(dims, rows, goals, seed);
    load_table(csv.as_bytes(), &format!("smooth_d{dims}_s{seed}")).expect("generated table loads")
}

/// The twenty-table suite: dimensions cycle through 3..=20, two or three goals.
pub fn suite(rows: usize) -> Vec<Table> {
    (0..20).map(|i| smooth_landscape(3 + (i * 7) % 18, rows, 2 + i % 2, 1000 + i as u64)).collect()
}

/// 200-row one-dimensional pool with target `(x - 0.3)^2`.
pub fn parabola_pool() -> Table {
    let mut s = String::from("X,Y-\n");
    for i in 0..200 {
        let x = i as f64 / 199.0;
        s.push_str(&format!("{x},{}\n", (x - 0.3).powi(2)));
    }
    load_table(s.as_bytes(), "parabola").unwrap()
}
