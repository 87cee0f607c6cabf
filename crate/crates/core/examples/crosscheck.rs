use fopidkit::avrloop::{sensitivity_set, AvrModel};
use fopidkit::fracops::{fopid_realize, FopidParams, OustaloupConfig};
use fopidkit::objectives::{eval_jd, eval_jst, eval_jtrack, eval_ju, WeightingFilters};
use fopidkit::sysnorms::NormGrid;

fn main() {
    let cases: [(&str, AvrModel); 2] = [
        ("default", AvrModel::default()),
        (
            "fitted",
            AvrModel {
                ka: 190.12529,
                ta: 0.088054855,
                ke: 1.0,
                te: 0.49089213,
                kg: 1.0,
                tg: 0.97646994,
                ks: 1.0,
                ts: 0.011583673,
            },
        ),
    ];
    let genomes = [
        ("case3 PID ", 0.07098, 0.21113, 0.01414, 0.05652, 1.0, 1.0),
        ("case1 PID ", 0.16736, 0.64860, 0.03387, 0.00062, 1.0, 1.0),
        ("case2 FOP4", 3.66876, 3.56893, 0.05366, 0.00002, 1.38923, 1.77811),
        ("case5 PID ", 0.00344, 0.00355, 0.00001, 0.87218, 1.0, 1.0),
    ];
    let ora = OustaloupConfig::default();
    let grid = NormGrid::default();
    let w = WeightingFilters::default();
    for (label, model) in &cases {
        println!("--- plant {label} ---");
        for (name, kp, ki, kd, tf, lam, mu) in genomes {
            let p = FopidParams { kp, ki, kd, tf_filter: tf, lambda: lam, mu };
            let c = fopid_realize(&p, &ora).unwrap();
            let set = sensitivity_set(&model.plant(), &model.sensor(), &c.tf).unwrap();
            let stable = set.char_roots.iter().all(|r| r.re < -1e-9);
            let jd = eval_jd(&set, &grid);
            let ju = eval_ju(&set, &grid);
            let jst = eval_jst(&set, &w, &grid);
            let jt = eval_jtrack(&set, &grid);
            println!(
                "{name} stable={stable} jd={jd:?} ju={ju:?} jst={jst:?} jtrack={jt:?}"
            );
        }
    }
}
