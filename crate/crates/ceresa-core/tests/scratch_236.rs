use ceresa_core::bounds::BoundMode;
use ceresa_core::certifier::{certify, PrimeSelection};
use ceresa_core::quartic::TernaryQuarticZ;

#[test]
fn curve_236_bounds() {
    let c = TernaryQuarticZ::parse(
        "x^4 + x^3*y + x^3*z + x^2*y^2 + x^2*z^2 + x*y^2*z + x*y*z^2 - y^3*z - y^2*z^2 - y*z^3",
    )
    .unwrap();
    let cert = certify(&c, &PrimeSelection::Bound { bound: 100, include_3: false }, BoundMode::FullH3, 0).unwrap();
    eprintln!("m_tilde = {:?}", cert.m_tilde);
    match &cert.n_tilde {
        ceresa_core::certifier::CombinedBound::Integer { value, small_factors, .. } => {
            eprintln!("n_tilde = {} = {:?}", value, small_factors);
        }
        other => eprintln!("n_tilde = {:?}", other),
    }
    eprintln!("verdict = {:?} early_exit={}", cert.verdict, cert.early_exit);
    for r in &cert.prime_records {
        eprintln!("p={} order={} m_p={:?}", r.p, r.shadow_order, r.m_p_stripped);
    }
}
