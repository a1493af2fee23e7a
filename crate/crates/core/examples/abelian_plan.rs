//! Pushforward summands and the composed rank for a tower of cyclic covers.

use ulrich::coverarith::{compose_abelian_plan, pushforward_summands, AbelianCoverSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let spec = AbelianCoverSpec::from_degrees(&[2, 3])?;
    let summands = pushforward_summands(&spec);
    println!("degrees (2, 3): {} summands", summands.len());
    for s in &summands {
        println!("  exponents {s:?}");
    }
    for specialize in [true, false] {
        let plan = compose_abelian_plan(&spec, &[1, 2], specialize)?;
        let ranks: Vec<u64> = plan.stages.iter().map(|s| s.rank).collect();
        println!("specialize {specialize}: stage ranks {ranks:?}, total {}", plan.total_rank);
    }
    println!("missing stage: {:?}", compose_abelian_plan(&spec, &[1], true).err());
    Ok(())
}
