use ceresa_core::bounds::BoundMode;
use ceresa_core::certifier::{certify_with_degree, PrimeSelection};
use ceresa_core::twist::{galois_orbit_quartic, LinearFormNf, NumberFieldCtx};

#[test]
fn fermat_twist_values() {
    let ctx = NumberFieldCtx::zeta7_plus();
    let l = LinearFormNf::fermat_twist_form(&ctx);
    let c = galois_orbit_quartic(&ctx, &l).unwrap();
    eprintln!("twist curve: {}", c.expression());
    let cert = certify_with_degree(&c, &PrimeSelection::Explicit(vec![5, 11]), BoundMode::FullH3, 0, 3).unwrap();
    eprintln!("m_tilde = {:?}", cert.m_tilde);
    eprintln!("n_tilde = {:?}", cert.n_tilde);
    eprintln!("verdict = {:?}", cert.verdict);
    for r in &cert.prime_records {
        eprintln!("p={} counts={:?} shadow_order={} m_p={:?} n_p_fac={:?} n_p_cof={}",
            r.p, r.point_counts, r.shadow_order, r.m_p_stripped, r.n_p_stripped_factors, r.n_p_cofactor);
    }
}
