// Page wiring: pad -> /pose -> schematic face, the corner gallery, and
// the curve scrubber. All values shown come from server responses or
// loaded curve files; this module does no blending math.

import { ApiClient, ApiError, LatestWins, Mode, PoseResponse } from './api.js';
import { Curve, curveDuration, frameAt, parseCurve } from './curve.js';
import { drawFace, faceParams, poseToRecord } from './face.js';
import { CORNER_ORDER, fetchGallery } from './gallery.js';
import { Pad, PadPoint } from './pad.js';

const $ = <T extends HTMLElement>(id: string): T => {
    const el = document.getElementById(id);
    if (!el) throw new Error(`missing element #${id}`);
    return el as T;
};

const banner = $('banner');

function showBanner(message: string): void {
    banner.textContent = message;
    banner.style.display = message ? 'block' : 'none';
}

function describeError(err: unknown): string {
    if (err instanceof ApiError) {
        const where = err.body.line != null ? ` (line ${err.body.line})` : '';
        return `${err.body.kind}: ${err.body.message}${where}`;
    }
    return `cannot reach the server: ${(err as Error).message ?? err}`;
}

function renderPose(canvas: HTMLCanvasElement, pose: PoseResponse): void {
    const ctx = canvas.getContext('2d');
    if (!ctx) return;
    drawFace(ctx, faceParams(poseToRecord(pose.units, pose.values)), canvas.width);
}

function renderReadout(pose: PoseResponse): void {
    const rows = pose.units
        .map((unit, i) => ({ unit, value: pose.values[i] }))
        .filter((row) => row.value !== 0)
        .map((row) => `<tr><td>${row.unit}</td><td>${row.value.toFixed(6)}</td></tr>`);
    $('readout').innerHTML = rows.length
        ? `<table><tbody>${rows.join('')}</tbody></table>`
        : '<p class="muted">neutral</p>';
}

async function start(): Promise<void> {
    const client = new ApiClient(
        new URLSearchParams(location.search).get('api') ?? location.origin);
    const faceCanvas = $<HTMLCanvasElement>('face');
    const padLabel = $('pad-label');
    const modeToggle = $<HTMLInputElement>('mode-discrete');

    const mode = (): Mode => (modeToggle.checked ? 'discrete' : 'continuous');

    const poseRequests = new LatestWins<PadPoint, PoseResponse>(
        (pt) => client.pose(pt.p, pt.a, mode()),
        (pt, pose) => {
            padLabel.textContent = `p = ${pt.p.toFixed(2)}, a = ${pt.a.toFixed(2)}`;
            renderPose(faceCanvas, pose);
            renderReadout(pose);
            showBanner('');
        },
        (err) => showBanner(describeError(err)),
    );

    const pad = new Pad($<HTMLCanvasElement>('pad'));
    pad.onChange = (pt) => poseRequests.request(pt);
    modeToggle.addEventListener('change', () => {
        pad.snap = modeToggle.checked;
        poseRequests.request(pad.current);
    });

    // gallery
    const galleryRoot = $('gallery');
    try {
        const cells = await fetchGallery(client);
        galleryRoot.innerHTML = '';
        cells.forEach((cell) => {
            const wrap = document.createElement('figure');
            const canvas = document.createElement('canvas');
            canvas.width = 110;
            canvas.height = 110;
            const caption = document.createElement('figcaption');
            caption.textContent = `(${cell.p}, ${cell.a})`;
            wrap.append(canvas, caption);
            wrap.addEventListener('click', () => pad.setPoint({ p: cell.p, a: cell.a }));
            galleryRoot.appendChild(wrap);
            renderPose(canvas, cell.pose);
        });
    } catch (err) {
        showBanner(describeError(err));
    }

    // curve scrubber
    let curve: Curve | null = null;
    let playing = false;
    let playTimer: ReturnType<typeof setInterval> | null = null;
    const scrubber = $<HTMLInputElement>('scrubber');
    const timeLabel = $('time-label');

    const showFrame = (t: number): void => {
        if (!curve) return;
        const values = frameAt(curve, t);
        const pose = { units: curve.units, values };
        renderPose($<HTMLCanvasElement>('curve-face'), pose);
        timeLabel.textContent = `t = ${t.toFixed(3)} s`;
        renderReadout(pose);
    };

    const loadCurve = (parsed: Curve): void => {
        curve = parsed;
        scrubber.disabled = false;
        $<HTMLButtonElement>('play').disabled = false;
        scrubber.min = '0';
        scrubber.max = String(curveDuration(parsed));
        scrubber.step = String(1 / parsed.fps);
        scrubber.value = '0';
        showFrame(0);
    };

    scrubber.addEventListener('input', () => showFrame(Number(scrubber.value)));

    $('play').addEventListener('click', () => {
        if (!curve) return;
        playing = !playing;
        $('play').textContent = playing ? 'pause' : 'play';
        if (playTimer) { clearInterval(playTimer); playTimer = null; }
        if (playing) {
            playTimer = setInterval(() => {
                if (!curve) return;
                const next = Number(scrubber.value) + 1 / curve.fps;
                const end = curveDuration(curve);
                scrubber.value = String(next >= end ? 0 : next);
                showFrame(Number(scrubber.value));
            }, 1000 / curve.fps);
        }
    });

    $('compile').addEventListener('click', async () => {
        const text = $<HTMLTextAreaElement>('annotation').value;
        try {
            loadCurve(parseCurve(await client.compile(text, { mode: mode() })));
            showBanner('');
        } catch (err) {
            showBanner(describeError(err));
        }
    });

    $<HTMLInputElement>('curve-file').addEventListener('change', async (ev) => {
        const input = ev.target as HTMLInputElement;
        const file = input.files?.[0];
        if (!file) return;
        try {
            loadCurve(parseCurve(await file.text()));
            showBanner('');
        } catch (err) {
            showBanner(`malformed curve file: ${(err as Error).message}`);
        }
    });

    // initial state: neutral center
    try {
        await client.health();
        pad.setPoint({ p: 0, a: 0 });
    } catch (err) {
        showBanner(describeError(err));
    }
}

start();

export { CORNER_ORDER };
