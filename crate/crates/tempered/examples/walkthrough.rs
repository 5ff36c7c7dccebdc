//! A tour of the library API: certificates, divisibility, membership,
//! classification, and the dyadic chain machinery.
//!
//! Run with `cargo run --release --example walkthrough`.

use tempered::expr::expr_to_string;
use tempered::growth::{audit_upper, infer_certificate};
use tempered::ideals::{classify_principal_prime, separator, PrimeClassification};
use tempered::krull::{membership_divergent, pattern_mask, zero_order};
use tempered::lattice::{LatticePoint, Window};
use tempered::ring::{divides, ideal_member, DivisibilityVerdict, MembershipVerdict};
use tempered::{GaussianRational, SeqExpr};

fn main() -> tempered::Result<()> {
    let dim = 2;
    let window = Window::new(dim, 40);

    // a polynomial-growth sequence and its certified growth bound
    let f = SeqExpr::sum(
        SeqExpr::product(SeqExpr::coord(dim, 0), SeqExpr::coord(dim, 1))?,
        SeqExpr::constant(dim, GaussianRational::from_int(3)),
    )?;
    let cert = infer_certificate(&f)?;
    let audit = audit_upper(&f, &cert, &window)?;
    println!(
        "growth: |f| <= {} (1+|n|)^{} [{} on {} samples]",
        cert.bound,
        cert.degree,
        if audit.validated() {
            "validated"
        } else {
            "falsified"
        },
        audit.samples,
    );

    // divisibility with an explicit cofactor
    let zero_at = LatticePoint::new(vec![1, -1]);
    let g = SeqExpr::dirac_complement(zero_at.clone());
    let multiple = SeqExpr::product(g.clone(), f.clone())?;
    match divides(&g, &multiple, &window, 32)? {
        DivisibilityVerdict::Divides {
            certificate, scope, ..
        } => println!(
            "divides: cofactor bounded by {} (1+|n|)^{} [{}]",
            certificate.bound,
            certificate.degree,
            scope.as_str(),
        ),
        other => println!("divides: {other:?}"),
    }

    // membership with cofactor witnesses: 1 lies in the ideal generated by
    // a point mass and its complement
    let origin = LatticePoint::origin(dim);
    let gens = vec![
        SeqExpr::dirac(origin.clone()),
        SeqExpr::dirac_complement(origin.clone()),
    ];
    match ideal_member(&SeqExpr::one(dim), &gens, &window, 32)? {
        MembershipVerdict::Member(witness) => println!(
            "membership: unit reconstructed from {} cofactors [{}]",
            witness.cofactors.len(),
            witness.scope.as_str(),
        ),
        other => println!("membership: {other:?}"),
    }

    // the principal ideal of a one-zero element is the fixed maximal ideal
    match classify_principal_prime(&g, &window, 32)? {
        PrimeClassification::FixedMaximal { point, .. } => {
            println!("classification: fixed maximal ideal at {point:?}");
        }
        other => println!("classification: {other:?}"),
    }
    let s = separator(&origin, &zero_at)?;
    println!("separator: {}", expr_to_string(&s)?);

    // the dyadic mask family: zero-orders and certified memberships
    let mask = pattern_mask(1, 2)?;
    let order = zero_order(&mask, &LatticePoint::new(vec![1 << 10]), 1 << 12)?;
    println!("zero-order of the order-2 mask at 2^10: {order:?}");
    let membership = membership_divergent(&mask, 2, 12)?;
    println!("mask membership: {:?}", membership.verdict);
    Ok(())
}
