import { ApiClient } from "./api.js";
import { startApp } from "./app.js";

// Same-origin service: `patternforge serve` hosts the API on this host/port.
startApp(document, new ApiClient(""));
