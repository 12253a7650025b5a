//! Tally the literal transfer network gate by gate and check the counts
//! against their closed forms.
//!
//! The published network has a fixed shape per register size: a prologue
//! that seeds the ancillas, then three groups. Group sizes depend only on
//! the qubit count n, never on the edge weights:
//!
//!   prologue  n + 1
//!   group 1   n(n-1) + 1
//!   group 2   3n + 1
//!   group 3   3n
//!   total     n^2 + 6n + 3
//!
//! Run with `cargo run --example count_network_gates`.

use entgraph::circuit::{build_literal, literal_stage_counts};
use entgraph::AnsatzParams;

fn main() -> entgraph::Result<()> {
    println!("n    prologue  group1  group2  group3  total   n^2+6n+3");
    for n in 3..=12 {
        let params = AnsatzParams::symmetric(n)?;
        let circuit = build_literal(&params)?;

        let counts = literal_stage_counts(n);
        let mut total = 0usize;
        let mut row = format!("{n:<5}");
        for (stage, expected) in counts {
            let got = circuit.stage_op_count(stage);
            assert_eq!(got, expected, "stage {} at n = {n}", stage.label());
            row.push_str(&format!("{got:<8}"));
            total += got;
        }
        let formula = n * n + 6 * n + 3;
        assert_eq!(total, formula);
        row.push_str(&format!("{total:<8}{formula}"));
        println!("{row}");
    }

    // The tally by gate kind for one size, as a sanity view.
    let circuit = build_literal(&AnsatzParams::symmetric(5)?)?;
    println!("\ngate tally at n = 5:");
    for (name, count) in circuit.gate_tally() {
        println!("  {name:<22}{count}");
    }

    Ok(())
}
