use ceresa_core::divisor::{CurveCtx, Divisor};
use ceresa_core::twist::{galois_orbit_quartic, LinearFormNf, NumberFieldCtx};
use ceresa_core::zeta::l_polynomial_genus3;
use num_bigint::BigUint;

#[test]
fn debug_shadow_11() {
    let nf = NumberFieldCtx::zeta7_plus();
    let l = LinearFormNf::fermat_twist_form(&nf);
    let c = galois_orbit_quartic(&nf, &l).unwrap();
    let cfp = c.reduce_mod(11).unwrap();
    let lp = l_polynomial_genus3(&cfp).unwrap();
    use num_traits::ToPrimitive;
    eprintln!("jac = {}", lp.jacobian_order());
    let ctx = CurveCtx::new(cfp).unwrap();
    let pts = ctx.rational_point_divisor();
    eprintln!("N1 = {}", pts.degree());
    let k = ctx.canonical_divisor();
    let s: Divisor = pts.scale(4).sub(&k.scale(pts.degree()));
    eprintln!("deg S = {}", s.degree());
    for m in [1u64, 2, 3, 4, 6, 12] {
        let rep = ctx.class_of_divisor(&s.scale(m as i64)).unwrap();
        let trivial = ctx.class_is_trivial(&rep).unwrap();
        // cross-check with scalar_mul path
        let rep1 = ctx.class_of_divisor(&s).unwrap();
        let repm = ctx.class_scalar_mul(&rep1, &BigUint::from(m)).unwrap();
        let trivial2 = ctx.class_is_trivial(&repm).unwrap();
        eprintln!("m={} trivial(scale)={} trivial(mul)={}", m, trivial, trivial2);
    }
}
