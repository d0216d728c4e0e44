use anyhow::Result;
use pbd_core::classical::{affine_plane, projective_plane};
use pbd_core::{Document, PrimePower};

use crate::{Outcome, PlaneArgs, PlaneKind};

pub fn run(args: &PlaneArgs) -> Result<Outcome> {
    let q = PrimePower::new(args.order)?;
    let (label, mut doc, design) = match args.kind {
        PlaneKind::Affine => {
            let (d, r) = affine_plane(q)?;
            ("affine-plane", Document::design(&d, Some(&r)), d)
        }
        PlaneKind::Projective => {
            let d = projective_plane(q)?;
            ("projective-plane", Document::design(&d, None), d)
        }
    };
    if let Some(meta) = doc.metadata_mut() {
        meta.insert("construction".into(), label.into());
        meta.insert("q".into(), q.order().to_string());
    }
    println!("{label} of order {}", q.order());
    println!("n: {}", design.n());
    println!("blocks: {}", design.block_count());
    println!("sigma: {}", design.sigma());
    if matches!(args.kind, PlaneKind::Affine) {
        println!("resolution: {} parallel classes", q.order() + 1);
    }
    if let Some(out) = &args.out {
        doc.write(out)?;
        println!("wrote {}", out.display());
    }
    Ok(Outcome::Ok)
}
