/**
 * Camera scanning for QR symbols.
 *
 * Frames from getUserMedia are sampled onto a canvas and decoded with jsQR
 * until a payload string appears. This is a browser-only convenience; the
 * decoded text goes through the same verify flow as pasted input.
 */

import jsQR from "jsqr";

export interface CameraScan {
  stop(): void;
  /** Resolves with the first decoded text, or rejects if the camera fails. */
  result: Promise<string>;
}

export function cameraAvailable(): boolean {
  return typeof navigator !== "undefined" && !!navigator.mediaDevices?.getUserMedia;
}

export function startCameraScan(video: HTMLVideoElement): CameraScan {
  let stopped = false;
  let stream: MediaStream | null = null;

  const result = new Promise<string>((resolve, reject) => {
    navigator.mediaDevices
      .getUserMedia({ video: { facingMode: "environment" } })
      .then((mediaStream) => {
        if (stopped) {
          mediaStream.getTracks().forEach((t) => t.stop());
          return;
        }
        stream = mediaStream;
        video.srcObject = mediaStream;
        void video.play();
        const canvas = document.createElement("canvas");
        const context = canvas.getContext("2d", { willReadFrequently: true });
        if (!context) {
          reject(new Error("canvas 2d context unavailable"));
          return;
        }
        const tick = () => {
          if (stopped) return;
          if (video.readyState >= video.HAVE_ENOUGH_DATA) {
            canvas.width = video.videoWidth;
            canvas.height = video.videoHeight;
            context.drawImage(video, 0, 0);
            const image = context.getImageData(0, 0, canvas.width, canvas.height);
            const found = jsQR(image.data, image.width, image.height);
            if (found?.data) {
              resolve(found.data);
              return;
            }
          }
          requestAnimationFrame(tick);
        };
        requestAnimationFrame(tick);
      })
      .catch(reject);
  });

  return {
    result,
    stop() {
      stopped = true;
      stream?.getTracks().forEach((t) => t.stop());
      video.srcObject = null;
    },
  };
}
