use gesture_pointer::geometry::{workplane_frame, PlaneOptions, Point3};

use crate::args::DefinePlaneArgs;
use crate::error::{CliResult, ResultExt};
use crate::planefile::{define_plane, read_corners};

pub fn run(args: &DefinePlaneArgs) -> CliResult<()> {
    let text = std::fs::read_to_string(&args.input).or_usage(format!("reading {}", args.input.display()))?;
    let corners = read_corners(&text)?;
    let opts = if args.up {
        PlaneOptions::default()
    } else {
        let [x, y, z] = args.viewpoint.unwrap_or([0.0; 3]);
        PlaneOptions::facing(Point3::new(x, y, z))
    };
    let file = define_plane(&corners, &opts, args.origin, args.x_corner)?;
    file.save(&args.output)?;

    let frame = workplane_frame(&file.plane, file.origin_corner, file.x_corner).or_usage("workplane frame")?;
    let n = file.plane.normal();
    let [w, qx, qy, qz] = frame.quaternion_wxyz();
    println!("plane written to {}", args.output.display());
    println!("normal {:.6} {:.6} {:.6}  d {:.6}", n.x, n.y, n.z, file.plane.d());
    println!("quaternion (w x y z) {w:.6} {qx:.6} {qy:.6} {qz:.6}");
    let residuals: Vec<String> = file.residuals.iter().map(|r| format!("{r:.6}")).collect();
    println!("residuals (m) {}", residuals.join(" "));
    Ok(())
}
