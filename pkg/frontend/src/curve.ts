// Model for compiled curve files: {"fps", "units", "frames": [[...]]}.

export interface Curve {
    fps: number;
    units: string[];
    frames: number[][];
}

export function parseCurve(text: string): Curve {
    let doc: unknown;
    try {
        doc = JSON.parse(text);
    } catch (err) {
        throw new Error(`not valid JSON: ${(err as Error).message}`);
    }
    const obj = doc as Partial<Curve>;
    if (typeof obj !== 'object' || obj === null) throw new Error('curve must be a JSON object');
    if (typeof obj.fps !== 'number' || obj.fps <= 0) throw new Error('curve needs fps > 0');
    if (!Array.isArray(obj.units) || obj.units.some((u) => typeof u !== 'string')) {
        throw new Error('curve needs a units array');
    }
    if (!Array.isArray(obj.frames) || obj.frames.length === 0) {
        throw new Error('curve needs a non-empty frames array');
    }
    for (const frame of obj.frames) {
        if (!Array.isArray(frame) || frame.length !== obj.units.length) {
            throw new Error('every frame must list one value per unit');
        }
    }
    return { fps: obj.fps, units: obj.units as string[], frames: obj.frames as number[][] };
}

export function curveDuration(curve: Curve): number {
    return (curve.frames.length - 1) / curve.fps;
}

// Frame shown at time t: floor(t * fps), clamped to the curve.
export function frameIndexAt(curve: Curve, t: number): number {
    const raw = Math.floor(t * curve.fps);
    return Math.max(0, Math.min(curve.frames.length - 1, raw));
}

export function frameAt(curve: Curve, t: number): number[] {
    return curve.frames[frameIndexAt(curve, t)];
}
