// The 3x3 corner-pose gallery: one schematic face per corner target,
// laid out arousal descending (rows) and pleasure ascending (columns),
// values fetched from the server per corner.

import { ApiClient, Mode, PoseResponse } from './api.js';

// Row-major: arousal descending, pleasure ascending.
export const CORNER_ORDER: ReadonlyArray<readonly [number, number]> = [
    [-1, 1], [0, 1], [1, 1],
    [-1, 0], [0, 0], [1, 0],
    [-1, -1], [0, -1], [1, -1],
];

export interface GalleryCell {
    p: number;
    a: number;
    pose: PoseResponse;
}

export async function fetchGallery(client: ApiClient, mode: Mode = 'continuous'):
        Promise<GalleryCell[]> {
    return Promise.all(
        CORNER_ORDER.map(async ([p, a]) => ({ p, a, pose: await client.pose(p, a, mode) })),
    );
}
