//! Build target graphs and check them against the per-edge feasibility
//! bound before spending any solver time.
//!
//! Every edge weight is a target pairwise concurrence. A weight above
//! `c_max(n)` can never be met by the state family, no matter what the
//! other edges ask for, so `validate` reports those edges up front.
//!
//! Run with `cargo run --example feasibility_check`.

use entgraph::{c_max, EntangledGraph};

fn main() -> entgraph::Result<()> {
    println!("per-edge concurrence bound by qubit count:");
    for n in [3usize, 4, 5, 6, 8, 12, 16] {
        println!("  n = {:>2}: c_max = {:.12}", n, c_max(n)?);
    }

    // A feasible 4-qubit graph: a square of moderate weights.
    let square = EntangledGraph::new(
        4,
        [(0, 1, 0.12), (1, 2, 0.12), (2, 3, 0.12), (3, 0, 0.12)],
    )?;
    let report = square.validate();
    println!(
        "\nsquare graph (4 qubits, 4 edges at 0.12): feasible = {}",
        report.feasible()
    );

    // The same shape with one weight pushed past the bound.
    let hot = EntangledGraph::new(
        4,
        [(0, 1, 0.30), (1, 2, 0.12), (2, 3, 0.12), (3, 0, 0.12)],
    )?;
    let report = hot.validate();
    println!(
        "hot square (edge (0,1) raised to 0.30): feasible = {}",
        report.feasible()
    );
    for v in &report.violations {
        println!(
            "  edge ({},{}) asks {} but the bound at n = {} is {:.12}",
            v.i, v.j, v.weight, hot.vertex_count(), v.bound
        );
    }

    // Graphs round-trip through a plain text format, one edge per line.
    let text = square.serialize();
    println!("\nserialized form:\n{text}");
    let back = EntangledGraph::parse(&text)?;
    assert_eq!(back, square);
    println!("parse(serialize(g)) == g");

    Ok(())
}
