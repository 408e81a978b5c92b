package com.acme.netlab.tests;

import com.acme.netlab.core.DeviceRegistry;
import com.acme.netlab.core.Session;
import com.acme.netlab.util.Log;
import static com.acme.netlab.core.TestSteps.*;

public class SessionResetTest {
    private Session session = new Session();

    public void resetParameterStep() {
        TestBegin("Reset parameter");
        resetParameter("timeout", "30");
        DeviceRegistry.getInstance().lookup("du1").powerOn();
        if (session.isConnected()) {
            doFunction();
        } else {
            doOtherFunction();
        }
        TestEnd();
    }

    public void resetAfterFailure() {
        TestBegin("Reset parameter after failure");
        resetParameter("mode", "safe");
        Log.error("resetting");
        TestEnd();
    }

    public void resetAndReconnect() {
        TestBegin("Reset parameter and reconnect session");
        resetParameter("mode", "fast");
        session.connect("du7");
        TestEnd();
    }

    private void resetParameter(String name, String value) {
    }

    private void doFunction() {
    }

    private void doOtherFunction() {
    }
}
