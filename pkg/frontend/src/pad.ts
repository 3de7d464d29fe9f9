// The pleasure/arousal pad: a square control surface mapping pointer
// position to (p, a) in [-1, 1] squared. Pleasure runs left to right,
// arousal bottom to top. The discrete toggle snaps to the nine corners
// with the same half-away-from-zero rounding the compiler uses.

export interface PadPoint {
    p: number;
    a: number;
}

export function pointerToPa(
    x: number, y: number, width: number, height: number, snap: boolean,
): PadPoint {
    const clamp = (v: number) => Math.max(-1, Math.min(1, v));
    let p = clamp((x / width) * 2 - 1);
    let a = clamp(1 - (y / height) * 2);
    if (snap) {
        p = snapAxis(p);
        a = snapAxis(a);
    }
    return { p, a };
}

export function snapAxis(v: number): number {
    return Math.sign(v) * Math.floor(Math.abs(v) + 0.5);
}

export function paToPointer(pt: PadPoint, width: number, height: number): { x: number; y: number } {
    return { x: ((pt.p + 1) / 2) * width, y: ((1 - pt.a) / 2) * height };
}

export class Pad {
    private point: PadPoint = { p: 0, a: 0 };
    private dragging = false;
    snap = false;
    onChange: (pt: PadPoint) => void = () => {};

    constructor(private canvas: HTMLCanvasElement) {
        canvas.addEventListener('pointerdown', (ev) => {
            this.dragging = true;
            canvas.setPointerCapture(ev.pointerId);
            this.handle(ev);
        });
        canvas.addEventListener('pointermove', (ev) => {
            if (this.dragging) this.handle(ev);
        });
        const stop = (ev: PointerEvent) => {
            if (!this.dragging) return;
            this.dragging = false;
            canvas.releasePointerCapture(ev.pointerId);
        };
        canvas.addEventListener('pointerup', stop);
        canvas.addEventListener('pointercancel', stop);
        this.draw();
    }

    get current(): PadPoint {
        return { ...this.point };
    }

    setPoint(pt: PadPoint): void {
        this.point = { p: Math.max(-1, Math.min(1, pt.p)), a: Math.max(-1, Math.min(1, pt.a)) };
        this.draw();
        this.onChange(this.current);
    }

    private handle(ev: PointerEvent): void {
        const rect = this.canvas.getBoundingClientRect();
        const x = ((ev.clientX - rect.left) / rect.width) * this.canvas.width;
        const y = ((ev.clientY - rect.top) / rect.height) * this.canvas.height;
        this.setPoint(pointerToPa(x, y, this.canvas.width, this.canvas.height, this.snap));
    }

    private draw(): void {
        const ctx = this.canvas.getContext('2d');
        if (!ctx) return;
        const w = this.canvas.width;
        const h = this.canvas.height;
        ctx.clearRect(0, 0, w, h);
        ctx.fillStyle = '#fafafa';
        ctx.fillRect(0, 0, w, h);
        ctx.strokeStyle = '#d0d0d0';
        ctx.lineWidth = 1;
        for (const frac of [0.25, 0.75]) {
            ctx.beginPath(); ctx.moveTo(w * frac, 0); ctx.lineTo(w * frac, h); ctx.stroke();
            ctx.beginPath(); ctx.moveTo(0, h * frac); ctx.lineTo(w, h * frac); ctx.stroke();
        }
        ctx.strokeStyle = '#8a8a8a';
        ctx.beginPath(); ctx.moveTo(w / 2, 0); ctx.lineTo(w / 2, h); ctx.stroke();
        ctx.beginPath(); ctx.moveTo(0, h / 2); ctx.lineTo(w, h / 2); ctx.stroke();
        ctx.strokeRect(0.5, 0.5, w - 1, h - 1);
        // corner markers
        ctx.fillStyle = '#b0b0b0';
        for (const cp of [-1, 0, 1]) {
            for (const ca of [-1, 0, 1]) {
                const pos = paToPointer({ p: cp, a: ca }, w, h);
                ctx.beginPath();
                ctx.arc(Math.max(4, Math.min(w - 4, pos.x)), Math.max(4, Math.min(h - 4, pos.y)),
                    3, 0, Math.PI * 2);
                ctx.fill();
            }
        }
        // knob
        const knob = paToPointer(this.point, w, h);
        ctx.fillStyle = '#1769aa';
        ctx.beginPath();
        ctx.arc(Math.max(6, Math.min(w - 6, knob.x)), Math.max(6, Math.min(h - 6, knob.y)),
            7, 0, Math.PI * 2);
        ctx.fill();
    }
}
