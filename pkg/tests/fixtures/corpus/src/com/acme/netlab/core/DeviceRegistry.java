package com.acme.netlab.core;

/** Singleton lookup table for managed devices. */
public class DeviceRegistry {
    private static DeviceRegistry instance = new DeviceRegistry();

    public static DeviceRegistry getInstance() {
        return instance;
    }

    public Device lookup(String name) {
        return new Device(name);
    }

    public void register(String name, Device device) {
        rebuild();
    }

    private void rebuild() {
    }
}
