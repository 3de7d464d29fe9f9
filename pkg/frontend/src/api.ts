// Typed client for the signface HTTP API. The UI never does blending
// math of its own: every displayed value comes from these responses or
// from a loaded curve file.

export type Mode = 'continuous' | 'discrete';

export interface PoseResponse {
    units: string[];
    values: number[];
}

export interface GridDoc {
    name: string;
    version: number;
    units: string[];
    poses: Record<string, (number | string)[]>;
}

export interface ApiErrorBody {
    kind: string;
    message: string;
    line: number | null;
    col: number | null;
}

export class ApiError extends Error {
    constructor(public body: ApiErrorBody, public status: number) {
        super(body.message);
    }
}

async function readError(resp: Response): Promise<ApiError> {
    try {
        const doc = await resp.json();
        return new ApiError(doc.error, resp.status);
    } catch {
        return new ApiError(
            { kind: 'HttpError', message: `HTTP ${resp.status}`, line: null, col: null },
            resp.status);
    }
}

export class ApiClient {
    constructor(
        public baseUrl: string,
        private fetchFn: typeof fetch = (...args) => fetch(...args),
    ) {}

    private async get(path: string): Promise<Response> {
        const resp = await this.fetchFn(this.baseUrl + path);
        if (!resp.ok) throw await readError(resp);
        return resp;
    }

    async health(): Promise<boolean> {
        const resp = await this.get('/health');
        const doc = await resp.json();
        return doc.ok === true;
    }

    async grid(): Promise<GridDoc> {
        const resp = await this.get('/grid');
        return resp.json();
    }

    async pose(p: number, a: number, mode: Mode = 'continuous'): Promise<PoseResponse> {
        const resp = await this.get(`/pose?p=${p}&a=${a}&mode=${mode}`);
        return resp.json();
    }

    async compile(text: string, opts: { fps?: number; mode?: Mode } = {}): Promise<string> {
        const params = new URLSearchParams({ format: 'json' });
        if (opts.fps !== undefined) params.set('fps', String(opts.fps));
        if (opts.mode !== undefined) params.set('mode', opts.mode);
        const resp = await this.fetchFn(`${this.baseUrl}/compile?${params}`, {
            method: 'POST',
            body: text,
        });
        if (!resp.ok) throw await readError(resp);
        return resp.text();
    }
}

// Latest-wins request coalescing for pad drags: at most one request in
// flight; while busy only the newest arguments are remembered, and a
// response is delivered only when nothing newer is queued behind it.
// The final displayed state is therefore the final pointer position
// regardless of network timing.
export class LatestWins<A, R> {
    private inflight = false;
    private pending: A | null = null;

    constructor(
        private run: (args: A) => Promise<R>,
        private deliver: (args: A, result: R) => void,
        private onError: (err: unknown) => void = () => {},
    ) {}

    request(args: A): void {
        if (this.inflight) {
            this.pending = args;
            return;
        }
        this.launch(args);
    }

    get busy(): boolean {
        return this.inflight;
    }

    private launch(args: A): void {
        this.inflight = true;
        this.run(args)
            .then((result) => {
                if (this.pending === null) this.deliver(args, result);
            })
            .catch((err) => this.onError(err))
            .finally(() => {
                this.inflight = false;
                const next = this.pending;
                this.pending = null;
                if (next !== null) this.launch(next);
            });
    }
}
