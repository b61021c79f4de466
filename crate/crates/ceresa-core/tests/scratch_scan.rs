use ceresa_core::divisor::CurveCtx;
use ceresa_core::shadows::frobenius_shadow;
use ceresa_core::twist::{galois_orbit_quartic, LinearFormNf, NumberFieldCtx};
use ceresa_core::zeta::l_polynomial_genus3;

#[test]
fn scan_shadow_orders() {
    let ctx = NumberFieldCtx::zeta7_plus();
    let l = LinearFormNf::fermat_twist_form(&ctx);
    let c = galois_orbit_quartic(&ctx, &l).unwrap();
    for p in c.good_primes(60, false) {
        let cfp = match c.reduce_mod(p) { Ok(x) => x, Err(_) => continue };
        let lp = l_polynomial_genus3(&cfp).unwrap();
        let cc = CurveCtx::new(cfp).unwrap();
        let sh = frobenius_shadow(&cc, &lp).unwrap();
        use num_traits::ToPrimitive;
        eprintln!("p={} jac={} shadow_order={} stripped={:?}",
            p, lp.jacobian_order().to_u64().unwrap(), sh.order, sh.stripped_order);
    }
}
