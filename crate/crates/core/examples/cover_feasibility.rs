//! Degree and h0 obstructions for cyclic covers of curves.

use ulrich::coverarith::{feasibility_report, riemann_hurwitz};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (g, d, branch, rank) in [(1, 2, 2, 1), (2, 3, 0, 1), (2, 2, 0, 3), (0, 2, 4, 1)] {
        let arith = riemann_hurwitz(g, d, branch)?;
        let rep = feasibility_report(&arith, rank);
        println!("g_base {g}, d {d}, branch degree {branch}, rank {rank}: {}", rep.verdict);
        for line in rep.narrative.lines() {
            println!("  {line}");
        }
    }
    println!("parity failure: {:?}", riemann_hurwitz(0, 2, 1).err());
    Ok(())
}
