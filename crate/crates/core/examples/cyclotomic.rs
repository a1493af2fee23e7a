//! Exact arithmetic in Q(ζ_d).

use ulrich::exactfield::{cyclotomic_polynomial, euler_phi, CycloField, CycloScalar};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for d in [1u32, 2, 3, 4, 5, 6, 12] {
        println!("Phi_{d} coefficients {:?}, degree {}", cyclotomic_polynomial(d), euler_phi(d));
    }

    let k = CycloField::new(5)?;
    let z = CycloScalar::zeta(&k);
    println!("zeta^5 = {}", z.pow(5));
    let sum = (0..5).fold(CycloScalar::zero(&k), |acc, i| acc.try_add(&CycloScalar::zeta_pow(&k, i)).unwrap());
    println!("1 + zeta + ... + zeta^4 = {sum}");

    let a = CycloScalar::parse("1/2 + 3*z - z^2", &k)?;
    let inv = a.inv()?;
    println!("({a})^-1 = {inv}");
    println!("check: {}", a.try_mul(&inv)?);

    let k6 = CycloField::new(6)?;
    let w = CycloScalar::zeta(&k6);
    let cube_root = w.pow(2);
    println!("zeta_6^2 has order 3: {}", cube_root.pow(3).is_one());
    Ok(())
}
