// Schematic 2D face. Every drawing parameter is a documented affine
// function of control-unit activations (the coefficient tables below),
// so neutral activations always render the neutral schematic and tests
// can assert geometry without a real renderer.

export interface FaceParams {
    browHeight: number;   // px the brows sit above neutral
    browAngle: number;    // deg of inner-end tilt, + = inner raised
    eyeOpenness: number;  // vertical eye scale, 1 = neutral
    mouthCornerX: number; // px of outward corner offset
    mouthCornerY: number; // px of downward corner offset (+ = frown)
    jawOpenness: number;  // px of lip separation
    noseWrinkle: number;  // 0..1 crease intensity
}

export const NEUTRAL_PARAMS: FaceParams = {
    browHeight: 0,
    browAngle: 0,
    eyeOpenness: 1,
    mouthCornerX: 0,
    mouthCornerY: 0,
    jawOpenness: 0,
    noseWrinkle: 0,
};

// parameter -> {unit: coefficient}; anything unlisted contributes 0.
export const PARAM_COEFFICIENTS: Record<keyof FaceParams, Record<string, number>> = {
    browHeight: { inner_brow_raiser: 9, outer_brow_raiser: 7, brow_lowerer: -8 },
    browAngle: { inner_brow_raiser: 10, brow_lowerer: -12 },
    eyeOpenness: { upper_lid_raiser: 0.55, eyes_widener: 0.45, lid_tightener: -0.6 },
    mouthCornerX: { lip_stretcher: 6, lip_corner_puller: 4, lip_puckerer: -5 },
    mouthCornerY: { lip_corner_puller: -12, lip_corner_depressor: 10 },
    jawOpenness: { jaw_drop: 20, lips_part: 8, mouth_stretch: 5 },
    noseWrinkle: { nose_wrinkler: 1 },
};

export function poseToRecord(units: string[], values: number[]): Record<string, number> {
    const out: Record<string, number> = {};
    units.forEach((name, i) => {
        out[name] = values[i];
    });
    return out;
}

export function faceParams(activations: Record<string, number>): FaceParams {
    const params = { ...NEUTRAL_PARAMS };
    for (const key of Object.keys(PARAM_COEFFICIENTS) as (keyof FaceParams)[]) {
        let value = NEUTRAL_PARAMS[key];
        const coeffs = PARAM_COEFFICIENTS[key];
        for (const unit of Object.keys(coeffs)) {
            value += coeffs[unit] * (activations[unit] ?? 0);
        }
        params[key] = value;
    }
    return params;
}

// Canvas rendering. Geometry is proportional to `size` (square canvas).
export function drawFace(ctx: CanvasRenderingContext2D, params: FaceParams, size: number): void {
    const s = size / 200; // neutral geometry authored on a 200px face
    const cx = size / 2;
    const cy = size / 2;

    ctx.clearRect(0, 0, size, size);
    ctx.lineWidth = 2.5 * s;
    ctx.lineCap = 'round';
    ctx.strokeStyle = '#2b2b2b';
    ctx.fillStyle = '#f4dcc2';

    // head
    ctx.beginPath();
    ctx.ellipse(cx, cy, 88 * s, 96 * s, 0, 0, Math.PI * 2);
    ctx.fill();
    ctx.stroke();

    // brows
    const browY = cy - 38 * s - params.browHeight * s;
    const angle = (params.browAngle * Math.PI) / 180;
    for (const side of [-1, 1]) {
        const inner = { x: cx + side * 12 * s, y: browY + Math.sin(-angle) * 6 * s };
        const outer = { x: cx + side * 44 * s, y: browY + Math.sin(angle) * 6 * s };
        ctx.beginPath();
        ctx.moveTo(inner.x, inner.y);
        ctx.lineTo(outer.x, outer.y);
        ctx.stroke();
    }

    // eyes
    const eyeY = cy - 18 * s;
    const eyeRy = Math.max(0.5, 7 * params.eyeOpenness) * s;
    for (const side of [-1, 1]) {
        ctx.beginPath();
        ctx.ellipse(cx + side * 28 * s, eyeY, 13 * s, eyeRy, 0, 0, Math.PI * 2);
        ctx.fillStyle = '#ffffff';
        ctx.fill();
        ctx.stroke();
        ctx.beginPath();
        ctx.arc(cx + side * 28 * s, eyeY, Math.min(4.5 * s, eyeRy * 0.8), 0, Math.PI * 2);
        ctx.fillStyle = '#2b2b2b';
        ctx.fill();
    }
    ctx.fillStyle = '#f4dcc2';

    // nose and wrinkle
    ctx.beginPath();
    ctx.moveTo(cx, cy - 6 * s);
    ctx.lineTo(cx - 6 * s, cy + 16 * s);
    ctx.lineTo(cx + 6 * s, cy + 16 * s);
    ctx.closePath();
    ctx.stroke();
    if (params.noseWrinkle > 0.01) {
        ctx.save();
        ctx.globalAlpha = Math.min(1, params.noseWrinkle);
        for (const dy of [-2, 2]) {
            ctx.beginPath();
            ctx.moveTo(cx - 10 * s, cy + (2 + dy) * s);
            ctx.quadraticCurveTo(cx, cy + (dy - 2) * s, cx + 10 * s, cy + (2 + dy) * s);
            ctx.stroke();
        }
        ctx.restore();
    }

    // mouth: corners offset by the corner params, lips split by jawOpenness
    const mouthY = cy + 46 * s;
    const cornerL = { x: cx - (26 + params.mouthCornerX) * s, y: mouthY + params.mouthCornerY * s };
    const cornerR = { x: cx + (26 + params.mouthCornerX) * s, y: mouthY + params.mouthCornerY * s };
    const gap = params.jawOpenness * s;
    ctx.beginPath();
    ctx.moveTo(cornerL.x, cornerL.y);
    ctx.quadraticCurveTo(cx, mouthY - gap * 0.25, cornerR.x, cornerR.y);
    ctx.stroke();
    if (gap > 0.5) {
        ctx.beginPath();
        ctx.moveTo(cornerL.x, cornerL.y);
        ctx.quadraticCurveTo(cx, mouthY + gap, cornerR.x, cornerR.y);
        ctx.stroke();
    }

    // chin hint when the jaw is open
    if (gap > 8) {
        ctx.beginPath();
        ctx.moveTo(cx - 10 * s, cy + (62 + gap * 0.35) * s);
        ctx.quadraticCurveTo(cx, cy + (66 + gap * 0.45) * s, cx + 10 * s, cy + (62 + gap * 0.35) * s);
        ctx.stroke();
    }
}
