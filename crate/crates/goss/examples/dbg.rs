use goss::fqpoly::FqPoly;
use goss::rings::*;
use goss::field::field;

fn main() {
    let ring = RingId::A1;
    let f = field(3, 1);
    let x = RingElem::new(ring, FqPoly::new(f, vec![0,1]), FqPoly::one(f));
    let y = RingElem::new(ring, FqPoly::new(f, vec![0,2]), FqPoly::zero(f));
    let fx = FractionElem::from_ring(x);
    let fy = FractionElem::from_ring(y);
    let a = fx.div(&fy).unwrap();
    let b = fy.div(&fx).unwrap();
    let prod = a.mul(&b);
    println!("a = {:?}", a);
    println!("b = {:?}", b);
    println!("prod = {:?}", prod);
    println!("eq one: {}", prod.eq(&FractionElem::one(ring)));

    for s in ["t^2+2*t+1", "0"] {
        let a = RingElem::parse(RingId::a0_f3(), s).unwrap();
        println!("{s:?} -> {:?} -> {:?}", a, a.to_text());
    }
    let z = RingElem::zero(RingId::A1);
    println!("zero text: {}", z.to_text());
    let z2 = RingElem::parse(RingId::A1, &z.to_text()).unwrap();
    println!("zero roundtrip ok: {}", z == z2);
}
