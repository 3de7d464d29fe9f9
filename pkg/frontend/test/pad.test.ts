import { describe, expect, it } from 'vitest';

import { paToPointer, pointerToPa, snapAxis } from '../src/pad.js';

describe('pointerToPa', () => {
    it('maps the pad center to (0, 0)', () => {
        expect(pointerToPa(130, 130, 260, 260, false)).toEqual({ p: 0, a: 0 });
    });

    it('maps corners with arousal up and pleasure right', () => {
        expect(pointerToPa(260, 0, 260, 260, false)).toEqual({ p: 1, a: 1 });
        expect(pointerToPa(0, 260, 260, 260, false)).toEqual({ p: -1, a: -1 });
    });

    it('cannot produce out-of-range points', () => {
        const pt = pointerToPa(9999, -50, 260, 260, false);
        expect(pt).toEqual({ p: 1, a: 1 });
    });

    it('snaps to the nine corners in discrete mode', () => {
        const pt = pointerToPa(200, 200, 260, 260, true);
        expect([-1, 0, 1]).toContain(pt.p);
        expect([-1, 0, 1]).toContain(pt.a);
    });
});

describe('snapAxis', () => {
    it('rounds halves away from zero, matching the compiler', () => {
        expect(snapAxis(0.5)).toBe(1);
        expect(snapAxis(-0.5)).toBe(-1);
        expect(snapAxis(0.49)).toBe(0);
        expect(snapAxis(0)).toBe(0);
        expect(snapAxis(1)).toBe(1);
    });
});

describe('paToPointer', () => {
    it('is the inverse of pointerToPa on the pad square', () => {
        for (const p of [-1, -0.5, 0, 0.25, 1]) {
            for (const a of [-1, -0.75, 0, 0.5, 1]) {
                const { x, y } = paToPointer({ p, a }, 260, 260);
                const back = pointerToPa(x, y, 260, 260, false);
                expect(back.p).toBeCloseTo(p, 12);
                expect(back.a).toBeCloseTo(a, 12);
            }
        }
    });
});
