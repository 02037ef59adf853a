use arccover::catalog::{base_system, build_catalog};
use arccover::{minimize_chain_length, CoverParams, SolveOptions};
use std::time::Instant;

fn main() {
    let p = CoverParams::canonical();
    let opts = SolveOptions::default();
    let r = minimize_chain_length(&base_system(&p), &opts).unwrap();
    println!("base {:?} {:.9} lb {:.9} gap {:.2e} kkt {:.2e} steps {}", r.status, r.primal_value, r.lower_bound, r.gap, r.kkt_residual, r.newton_steps);
    for c in build_catalog(&p) {
        let t0 = Instant::now();
        let r = minimize_chain_length(&c.constraints, &opts).unwrap();
        println!("{:8} {:?} {:.7} lb {:.9} gap {:.2e} feas {:.1e} kkt {:.2e} steps {} published {:?} {:.1}ms", c.name, r.status, r.primal_value, r.lower_bound, r.gap, r.feas_residual, r.kkt_residual, r.newton_steps, c.published_bound, t0.elapsed().as_secs_f64()*1e3);
    }
}
