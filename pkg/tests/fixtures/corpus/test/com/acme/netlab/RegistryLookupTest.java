package com.acme.netlab.tests;

import com.acme.netlab.core.Device;
import com.acme.netlab.core.DeviceRegistry;
import com.acme.netlab.util.Log;
import static com.acme.netlab.core.TestSteps.*;

public class RegistryLookupTest {

    public void lookupExisting() {
        TestBegin("Lookup device in registry");
        Device device = DeviceRegistry.getInstance().lookup("du1");
        Log.info(device.name());
        TestEnd();
    }

    public void registerThenLookup() {
        TestBegin("Register device then lookup");
        DeviceRegistry.getInstance().register("du9", new Device("du9"));
        DeviceRegistry.getInstance().lookup("du9");
        TestEnd();
    }

    public void lookupLogsStatus() {
        TestBegin("Lookup device and log status");
        Device device = DeviceRegistry.getInstance().lookup("du2");
        Log.info(device.status());
        TestEnd();
    }

    public void registryRoundTrip() {
        TestBegin("Registry register lookup round trip");
        DeviceRegistry registry = DeviceRegistry.getInstance();
        registry.register("du3", new Device("du3"));
        Device device = registry.lookup("du3");
        device.powerOn();
        TestEnd();
    }
}
