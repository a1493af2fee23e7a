//! Writing a branch form as a sum of products of forms.

use ulrich::gradedgeom::{decompose_in_image, BaseVariety};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let p2 = BaseVariety::projective_space(2);
    let s = p2.ring().parse("x0^3 + 2*x0*x1*x2 - x1^3 + 5*x1*x2^2 + x2^3 - 3*x0^2*x2")?;
    let dec = decompose_in_image(&p2, 1, 3, &s)?;
    println!("one term per monomial: {} terms", dec.term_count());
    let small = dec.compact();
    println!("compacted: {} terms", small.term_count());
    for term in &small.terms {
        let factors: Vec<String> = term.iter().map(|a| format!("({a})")).collect();
        println!("  {}", factors.join(" * "));
    }
    println!("expansion matches: {}", small.expand_in(p2.ring()) == s);

    let p1 = BaseVariety::projective_space(1);
    let s = p1.ring().parse("x0^4 - x0^2*x1^2 + 5*x1^4")?;
    let dec = decompose_in_image(&p1, 2, 2, &s)?.compact();
    println!(
        "on P^1 with n = 2: {} terms, first {:?}",
        dec.term_count(),
        dec.terms[0].iter().map(|a| a.to_string()).collect::<Vec<_>>()
    );
    Ok(())
}
