//! Bakry-Emery Ricci tensor of the weighted Grushin half-plane, computed from
//! the metric and compared with the closed form, and the `N_p` threshold.
//!
//! Usage: `cargo run --example grushin_ricci`

use srkit::grushin::{n_threshold, ricci_from_metric, ricci_nv, ricci_psd, NParam};
use srkit::symcore::rational::{int, rat};

fn main() {
    for p in [rat(3, 2), int(2), int(3), int(5)] {
        let np = n_threshold(&p).expect("p >= 1");
        let at = |n: NParam| ricci_psd(&p, &n, &int(1)).expect("N > 2");
        let below = match &np {
            NParam::Finite(n) => at(NParam::Finite(n - rat(1, 100))),
            NParam::Infinite => false,
        };
        println!("p = {p}: N_p = {np}, PSD just below {below}, at N_p {}", at(np.clone()));
    }
    let (p, n) = (int(3), NParam::Finite(int(10)));
    let closed = ricci_nv(&p, &n).unwrap();
    let metric = ricci_from_metric(&p, &n).unwrap();
    println!("p = 3, N = 10: xx = {}, xy = {}, yy = {}", closed.xx, closed.xy, closed.yy);
    println!("metric route agrees: {}", closed == metric);
}
