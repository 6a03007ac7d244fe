/** Three.js voxel viewer: renders the world store, orbits, and turns clicks
 * into world rays for hint and prompt capture. */
import * as THREE from 'three';
import { OrbitControls } from 'three/examples/jsm/controls/OrbitControls.js';
import { clientToNdc, pickRay } from './pickRay.js';
import type { PickedRay } from './pickRay.js';
import { voxelRaycast, type VoxelHit } from './voxelRaycast.js';
import type { WorldStore } from './worldStore.js';

const BLOCK_COLORS: Record<number, number> = {
  1: 0x9e9e9e, // stone
  2: 0x795548, // dirt
  3: 0xc8a165, // plank
  4: 0xb0563c, // brick
  5: 0x9fd8ef, // glass
  6: 0xd94f4f, // bed
  7: 0x8d6e63, // fence post
  8: 0xffc84a, // torch
  9: 0xa1887f, // ladder
  10: 0x66bb6a, // grass
};

export class Viewer {
  readonly renderer: THREE.WebGLRenderer;
  readonly scene = new THREE.Scene();
  readonly camera: THREE.PerspectiveCamera;
  private readonly controls: OrbitControls;
  private blocks = new THREE.Group();
  private promptGroup = new THREE.Group();
  private hover: THREE.Mesh;

  constructor(
    private readonly canvas: HTMLCanvasElement,
    private readonly store: WorldStore,
  ) {
    this.renderer = new THREE.WebGLRenderer({ canvas, antialias: true });
    this.camera = new THREE.PerspectiveCamera(
      55, canvas.clientWidth / canvas.clientHeight, 0.1, 1024);
    this.camera.position.set(14, 12, 14);
    this.controls = new OrbitControls(this.camera, canvas);
    this.controls.target.set(2.5, 1.5, 2.5);
    this.scene.background = new THREE.Color(0x11141a);
    this.scene.add(new THREE.AmbientLight(0xffffff, 0.65));
    const sun = new THREE.DirectionalLight(0xffffff, 1.0);
    sun.position.set(30, 60, 20);
    this.scene.add(sun);
    this.scene.add(new THREE.GridHelper(64, 64, 0x333944, 0x22262e));
    this.scene.add(this.blocks);
    this.scene.add(this.promptGroup);
    const hoverGeo = new THREE.BoxGeometry(1.02, 1.02, 1.02);
    const hoverMat = new THREE.MeshBasicMaterial({
      color: 0xffffff, transparent: true, opacity: 0.25,
    });
    this.hover = new THREE.Mesh(hoverGeo, hoverMat);
    this.hover.visible = false;
    this.scene.add(this.hover);
  }

  /** Rebuild block meshes from the store (houses here are small). */
  refresh(): void {
    this.blocks.clear();
    const geo = new THREE.BoxGeometry(1, 1, 1);
    const materials = new Map<number, THREE.MeshLambertMaterial>();
    this.store.forEach((x, y, z, cell) => {
      let mat = materials.get(cell.t);
      if (!mat) {
        mat = new THREE.MeshLambertMaterial({
          color: BLOCK_COLORS[cell.t] ?? 0xcccccc,
          transparent: cell.t === 5,
          opacity: cell.t === 5 ? 0.6 : 1.0,
        });
        materials.set(cell.t, mat);
      }
      const mesh = new THREE.Mesh(geo, mat);
      mesh.position.set(x + 0.5, y + 0.5, z + 0.5);
      this.blocks.add(mesh);
    });
  }

  showPromptBlock(x: number, y: number, z: number): void {
    const mesh = new THREE.Mesh(
      new THREE.BoxGeometry(0.95, 0.95, 0.95),
      new THREE.MeshLambertMaterial({ color: 0xf0d060, transparent: true, opacity: 0.8 }),
    );
    mesh.position.set(x + 0.5, y + 0.5, z + 0.5);
    this.promptGroup.add(mesh);
  }

  clearPromptBlocks(): void {
    this.promptGroup.clear();
  }

  setHover(hit: VoxelHit | null): void {
    if (hit) {
      this.hover.position.set(hit.cell[0] + 0.5, hit.cell[1] + 0.5, hit.cell[2] + 0.5);
      this.hover.visible = true;
    } else {
      this.hover.visible = false;
    }
  }

  /** World-space ray under a mouse event. */
  rayAt(clientX: number, clientY: number): PickedRay {
    const rect = this.canvas.getBoundingClientRect();
    const [nx, ny] = clientToNdc(clientX, clientY, rect);
    return pickRay(
      {
        position: this.camera.position.toArray() as [number, number, number],
        target: this.controls.target.toArray() as [number, number, number],
        fovYDegrees: this.camera.fov,
        aspect: this.camera.aspect,
      },
      nx, ny,
    );
  }

  hitAt(clientX: number, clientY: number): VoxelHit | null {
    const ray = this.rayAt(clientX, clientY);
    return voxelRaycast(this.store, ray.origin, ray.direction);
  }

  start(): void {
    const loop = () => {
      this.controls.update();
      this.renderer.render(this.scene, this.camera);
      requestAnimationFrame(loop);
    };
    this.renderer.setSize(this.canvas.clientWidth, this.canvas.clientHeight, false);
    loop();
  }
}
