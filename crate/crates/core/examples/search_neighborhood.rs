use std::time::Instant;

use arccover::search::{search, Range, SearchConfig};

fn main() {
    let t0 = Instant::now();
    let cfg = SearchConfig::around_canonical(1.00001, 0.05);
    let out = search(&cfg).unwrap();
    println!("canonical nbhd: found {} best s {:.7} t {:.7} s2 {:.7} area {:.7} evals {} {:?}", out.found, out.best.s, out.best.t, out.best.s2, out.report.area, out.trace.len(), t0.elapsed());
    let t1 = Instant::now();
    let mut cfg = SearchConfig::around_canonical(1.00001, 0.05);
    cfg.s = Range { min: 0.08, max: 0.25 };
    cfg.t = Range { min: 0.08, max: 0.25 };
    cfg.s2 = Range::fixed(0.0);
    let out = search(&cfg).unwrap();
    println!("pentagon: found {} best s {:.7} t {:.7} area {:.7} evals {} {:?}", out.found, out.best.s, out.best.t, out.report.area, out.trace.len(), t1.elapsed());
    let b = out.report.binding_case().unwrap();
    println!("binding {} {:.7}", b.name, b.lower_bound);
}
