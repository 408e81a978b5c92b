package com.acme.netlab.tests;

import com.acme.netlab.core.Device;
import com.acme.netlab.core.DeviceRegistry;
import com.acme.netlab.util.Log;
import com.acme.netlab.util.Text;
import static com.acme.netlab.core.TestSteps.*;

public class StatusReportTest {

    public void reportOneDevice() {
        TestBegin("Report status for one device");
        Device device = DeviceRegistry.getInstance().lookup("du1");
        Log.info(Text.join(device.name(), device.status()));
        TestEnd();
    }

    public void reportHeaderOnly() {
        TestBegin("Report status header only");
        Log.info(Text.join("status", "report"));
        TestEnd();
    }

    public void reportAndSwitch() {
        TestBegin("Report status and branch on value");
        Device device = DeviceRegistry.getInstance().lookup("du2");
        switch (device.status()) {
            case "ok":
                Log.info("healthy");
                break;
            default:
                Log.error("unhealthy");
        }
        TestEnd();
    }
}
