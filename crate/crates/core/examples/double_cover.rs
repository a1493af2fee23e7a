//! The 2×2 factorization of T² − ab.

use ulrich::matfac::double_cover_mf;
use ulrich::polyring::PolyRing;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ring = PolyRing::rational(3).with_t(1);
    let a = ring.parse("x0 + 2*x1")?;
    let b = ring.parse("x1 - x2")?;
    let (b1, b2) = double_cover_mf(&a, &b)?;
    println!("B1 = {:?}", b1.to_strings());
    println!("B2 = {:?}", b2.to_strings());
    let f = ring.t().pow(2) - &a * &b;
    println!("B1 B2 = ({f}) I: {}", b1.mul(&b2).is_scalar_identity(&f));
    println!("B2 B1 = ({f}) I: {}", b2.mul(&b1).is_scalar_identity(&f));
    Ok(())
}
