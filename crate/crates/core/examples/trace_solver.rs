// scratch reproduction
use tailsmooth::distributions::GpdParams;
use tailsmooth::logcon::{fit, SampleData};
use tailsmooth::rng::RngState;

fn main() {
    let p = GpdParams::new(-0.75, 1.0).unwrap();
    let xs = p.sample(64, &mut RngState::new(72));
    let data = SampleData::prepare(&xs).unwrap();
    match fit(&data) {
        Ok((f, d)) => println!("ok: knots={} gap={:e} iters={}", f.knot_count(), d.final_gap, d.iterations),
        Err(e) => println!("err: {e}"),
    }
}
